"""Tests for RunData."""

import numpy as np
import pytest

pytest.importorskip("polars")

from cqwave.analysis.export import RunExporter  # noqa: E402
from cqwave.analysis.loading.loader import RunData  # noqa: E402


@pytest.fixture
def run_dir(tmp_path, grid, bump_field):
    exporter = RunExporter(tmp_path / "run_20251130_120000", seed=4, command="evolve", grid=grid)
    exporter.write_table(
        "trajectory",
        [
            {"t": t, "E": 0.5, "P": 0.1, "sup_mod": 1.2, "bdry_dev": 0.0}
            for t in (0.0, 0.1, 0.2)
        ],
    )
    exporter.save_snapshot(bump_field, 0.25, 0.3)
    exporter.finalize()
    return exporter.output_dir


class TestRunData:
    """Tests for RunData."""

    def test_table_skips_comment(self, run_dir):
        data = RunData(run_dir)
        assert data.trajectory.columns == ["t", "E", "P", "sup_mod", "bdry_dev"]
        assert data.trajectory.height == 3
        assert data.trajectory["t"].to_list() == pytest.approx([0.0, 0.1, 0.2])

    def test_header(self, run_dir, grid):
        assert RunData(run_dir).header("trajectory") == f"seed=4 {grid.describe()}"

    def test_snapshot(self, run_dir, bump_field):
        snap = RunData(run_dir).snapshot
        assert np.array_equal(snap.field.values, bump_field.values)
        assert (snap.A, snap.c) == (0.25, 0.3)

    def test_repr(self, run_dir):
        assert "run_20251130_120000" in repr(RunData(run_dir))
