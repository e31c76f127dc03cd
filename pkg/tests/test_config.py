"""Tests for YAML run configuration."""

from pathlib import Path

import pytest

from cqwave.cli.config import RunConfig, load_config, parse_config
from cqwave.core.errors import ParseError, ValidationError


class TestParseConfig:
    """Tests for parse_config."""

    def test_minimal_params(self):
        cfg = parse_config("params:\n  A: 0.3\n  c: 0.5\n")
        assert cfg.params.A == 0.3
        assert cfg.params.c == 0.5
        assert cfg.params.raw is None
        assert cfg.grid == RunConfig().grid
        assert cfg.solver == RunConfig().solver
        assert cfg.seed == 0

    def test_empty_document_gives_defaults(self):
        assert parse_config("") == RunConfig()

    def test_raw_coefficients_are_reduced(self):
        cfg = parse_config("params:\n  alpha1: 0.5\n  alpha3: 1.5\n  alpha5: 1\n  c: 1\n")
        assert cfg.params.A == pytest.approx(0.25, abs=1e-12)
        assert cfg.params.gamma == pytest.approx(1.0, abs=1e-12)
        assert cfg.params.raw.alpha5 == 1.0

    def test_missing_alpha(self):
        with pytest.raises(ValidationError) as exc_info:
            parse_config("params:\n  alpha1: 0.5\n  alpha5: 1\n")
        assert any("params.alpha3" in e for e in exc_info.value.errors)

    def test_alphas_and_A_conflict(self):
        with pytest.raises(ValidationError) as exc_info:
            parse_config("params:\n  A: 0.2\n  alpha1: 0.5\n  alpha3: 1.5\n  alpha5: 1\n")
        assert any(e.startswith("params.A") for e in exc_info.value.errors)

    def test_invalid_coefficients_reported(self):
        with pytest.raises(ValidationError) as exc_info:
            parse_config("params:\n  alpha1: 1\n  alpha3: 1\n  alpha5: 1\n")
        assert any(e.startswith("params:") for e in exc_info.value.errors)

    def test_negative_speed(self):
        with pytest.raises(ValidationError) as exc_info:
            parse_config("params:\n  A: 0.25\n  c: -1\n")
        assert any("params.c" in e for e in exc_info.value.errors)

    @pytest.mark.parametrize("A", [0.0, 1.0, 1.5])
    def test_A_out_of_range(self, A):
        with pytest.raises(ValidationError):
            parse_config(f"params:\n  A: {A}\n")

    def test_unknown_keys_collected(self):
        """Every problem is reported at once."""
        text = "params:\n  A: 0.2\n  speed: 1\ngrid:\n  n1: 4\nsolver:\n  max_iter: 3\nextras: {}\n"
        with pytest.raises(ValidationError) as exc_info:
            parse_config(text)
        errors = exc_info.value.errors
        assert any(e.startswith("params.speed") for e in errors)
        assert any(e.startswith("grid") for e in errors)
        assert any(e.startswith("solver.max_iter") for e in errors)
        assert any(e.startswith("extras") for e in errors)
        assert "invalid configuration" in str(exc_info.value)

    def test_wrong_types(self):
        with pytest.raises(ValidationError) as exc_info:
            parse_config("grid:\n  n1: 33.5\nparams:\n  A: zero\n")
        errors = exc_info.value.errors
        assert any(e.startswith("grid.n1") for e in errors)
        assert any(e.startswith("params.A") for e in errors)

    def test_sections(self):
        text = (
            "grid:\n  d: 2\n  N: 8\n  L: 8\n  n1: 33\n  nt: 16\n"
            "ansatz:\n  family: vortex_pair\n  separation: 3.0\n"
            "solver:\n  max_iters: 50\n  preconditioner: none\n"
            "dynamics:\n  dt: 0.001\n  T: 0.01\n  stride: 2\n"
            "scan:\n  n_A: 3\n  n_c: 4\n"
            "verify:\n  keylem_nodes: 5\n"
            "seed: 42\n"
        )
        cfg = parse_config(text)
        assert cfg.grid.build().shape == (33, 16)
        assert cfg.ansatz.family == "vortex_pair"
        assert cfg.solver.max_iters == 50
        assert cfg.solver.preconditioner == "none"
        assert cfg.dynamics.monitor_stride == 2
        assert cfg.dynamics.n_steps == 10
        assert (cfg.scan.n_A, cfg.scan.n_c) == (3, 4)
        assert cfg.verify.keylem_nodes == 5
        assert cfg.seed == 42

    def test_stride_key_name(self):
        with pytest.raises(ValidationError):
            parse_config("dynamics:\n  monitor_stride: 2\n")

    def test_dynamics_constraints(self):
        with pytest.raises(ValidationError) as exc_info:
            parse_config("dynamics:\n  dt: 0.5\n  T: 0.1\n")
        assert any(e.startswith("dynamics") for e in exc_info.value.errors)

    @pytest.mark.parametrize("seed", ["-1", "true", "1.5", str(2**64)])
    def test_invalid_seed(self, seed):
        with pytest.raises(ValidationError):
            parse_config(f"seed: {seed}\n")

    def test_largest_seed(self):
        assert parse_config(f"seed: {2**64 - 1}\n").seed == 2**64 - 1

    def test_malformed_yaml_position(self):
        with pytest.raises(ParseError) as exc_info:
            parse_config("params:\n  A: 0.25\n  c: [1.0, 2.0\n")
        assert exc_info.value.line >= 3
        assert exc_info.value.column >= 1
        assert "line" in str(exc_info.value)

    def test_non_mapping_section(self):
        with pytest.raises(ValidationError):
            parse_config("grid: 5\n")


class TestLoadConfig:
    """Tests for load_config and seed overrides."""

    def test_none_gives_defaults(self):
        assert load_config(None) == RunConfig()

    def test_reads_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("params:\n  A: 0.4\n")
        assert load_config(path).params.A == 0.4

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError):
            load_config(tmp_path / "missing.yaml")

    def test_seed_override(self):
        cfg = RunConfig().with_seed(7)
        assert cfg.seed == 7
        assert RunConfig().with_seed(None).seed == 0
        with pytest.raises(ValidationError):
            RunConfig().with_seed(-3)

    def test_example_config(self):
        """The shipped example configuration parses to the defaults."""
        path = Path(__file__).resolve().parent.parent / "data" / "default_run.yaml"
        assert load_config(path) == RunConfig()
