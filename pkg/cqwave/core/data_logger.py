"""
Iteration logging for solvers and time steppers. One logger is usually shared by
a whole run so the CLI can export every history from one place.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any


@dataclass
class IterationLog:
    notes: list[str] = field(default_factory=list)
    metrics: dict[str, float] = field(default_factory=dict)


class DataLogger:
    def __init__(self) -> None:
        self._log: dict[tuple[str, int], IterationLog] = defaultdict(IterationLog)
        self._iterations: dict[str, list[int]] = defaultdict(list)

    def _entry(self, run: str, iteration: int) -> IterationLog:
        key = (run, iteration)
        if key not in self._log:
            self._iterations[run].append(iteration)
        return self._log[key]

    def log_metrics(self, run: str, iteration: int, **metrics: float) -> None:
        self._entry(run, iteration).metrics.update(metrics)

    def log_note(self, run: str, iteration: int, note: str) -> None:
        self._entry(run, iteration).notes.append(note)

    def runs(self) -> list[str]:
        return list(self._iterations)

    def get_history(self, run: str, metric: str) -> list[float]:
        history = []
        for iteration in self._iterations.get(run, []):
            value = self._log[(run, iteration)].metrics.get(metric)
            if value is not None:
                history.append(value)
        return history

    def get_notes(self, run: str) -> list[tuple[int, str]]:
        notes = []
        for iteration in self._iterations.get(run, []):
            notes.extend((iteration, n) for n in self._log[(run, iteration)].notes)
        return notes

    def rows(self, run: str) -> list[dict[str, Any]]:
        """Flat rows (iteration + metrics) in logging order, for table export."""
        return [
            {"run": run, "iteration": iteration, **self._log[(run, iteration)].metrics}
            for iteration in self._iterations.get(run, [])
        ]

    def all_rows(self) -> list[dict[str, Any]]:
        """rows() of every run, runs in first-logged order."""
        return [row for run in self.runs() for row in self.rows(run)]

    def note_rows(self) -> list[dict[str, Any]]:
        return [
            {"run": run, "iteration": iteration, "note": note}
            for run in self.runs()
            for iteration, note in self.get_notes(run)
        ]
