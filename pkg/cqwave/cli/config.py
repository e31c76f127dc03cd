"""YAML run configuration: parsing, defaults and validation.

Every problem in a document is collected before raising, so a single
``ValidationError`` names all offending ``section.key`` entries.
"""

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Optional

import yaml

from cqwave.core.dynamics import EvolutionConfig
from cqwave.core.errors import CqwaveError, ParseError, ValidationError
from cqwave.core.grid import Grid
from cqwave.core.params import CubicQuinticParams, reduce, sound_speed
from cqwave.core.solvers import AnsatzSpec, SolverConfig

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ParamsSection:
    A: float = 0.25
    c: float = 1.0
    raw: Optional[CubicQuinticParams] = None
    gamma: float = 1.0

    @property
    def vs(self) -> float:
        return sound_speed(self.A)


@dataclass(frozen=True)
class GridSection:
    d: int = 2
    N: float = 10.0
    L: float = 20.0
    n1: int = 101
    nt: int = 64

    def build(self) -> Grid:
        return Grid(d=self.d, N=self.N, L=self.L, n1=self.n1, nt=self.nt)


@dataclass(frozen=True)
class ScanSection:
    A_min: float = 0.05
    A_max: float = 0.95
    n_A: int = 10
    c_fraction_min: float = 0.05
    c_fraction_max: float = 0.95
    n_c: int = 10
    s_max: float = 10.0
    n_samples: int = 10_000
    endpoint_budget: int = 200

    def __post_init__(self) -> None:
        if not 0.0 < self.A_min <= self.A_max < 1.0:
            raise ValueError("need 0 < A_min <= A_max < 1")
        if not 0.0 < self.c_fraction_min <= self.c_fraction_max:
            raise ValueError("need 0 < c_fraction_min <= c_fraction_max")
        if self.n_A < 1 or self.n_c < 1:
            raise ValueError("n_A and n_c must be at least 1")
        if self.n_samples < 2:
            raise ValueError("n_samples must be at least 2")
        if self.endpoint_budget < 1:
            raise ValueError("endpoint_budget must be at least 1")


@dataclass(frozen=True)
class VerifySection:
    identity_samples: int = 10_000
    keylem_nodes: int = 20
    keylem_samples: int = 10_000

    def __post_init__(self) -> None:
        if min(self.identity_samples, self.keylem_nodes) < 1 or self.keylem_samples < 2:
            raise ValueError("sample counts must be positive")


@dataclass(frozen=True)
class RunConfig:
    params: ParamsSection = field(default_factory=ParamsSection)
    grid: GridSection = field(default_factory=GridSection)
    ansatz: AnsatzSpec = field(default_factory=AnsatzSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    dynamics: EvolutionConfig = field(default_factory=EvolutionConfig)
    scan: ScanSection = field(default_factory=ScanSection)
    verify: VerifySection = field(default_factory=VerifySection)
    seed: int = 0

    def with_seed(self, seed: Optional[int]) -> "RunConfig":
        if seed is None:
            return self
        if not 0 <= seed <= MAX_SEED:
            raise ValidationError([f"seed: must be an unsigned 64-bit integer, got {seed}"])
        return replace(self, seed=seed)


# --- value checks --------------------------------------------------------


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _as_float(value: Any) -> float:
    if not _is_number(value) or not math.isfinite(value):
        raise TypeError("must be a finite number")
    return float(value)


def _as_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError("must be an integer")
    return value


def _as_str(value: Any) -> str:
    if not isinstance(value, str):
        raise TypeError("must be a string")
    return value


def _caster(default: Any) -> Callable[[Any], Any]:
    if isinstance(default, bool):
        raise AssertionError("no boolean config keys")
    if isinstance(default, int):
        return _as_int
    if isinstance(default, float):
        return _as_float
    return _as_str


class _Collector:
    def __init__(self) -> None:
        self.errors: list[str] = []

    def add(self, where: str, message: str) -> None:
        self.errors.append(f"{where}: {message}")

    def mapping(self, name: str, value: Any) -> dict[str, Any]:
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.add(name, "section must be a mapping")
            return {}
        return value

    def build(self, name: str, cls: type, data: dict[str, Any]) -> Any:
        """Instantiate ``cls`` from ``data``, typed by the dataclass defaults."""
        defaults = {f.name: f.default for f in fields(cls)}
        kwargs = {}
        ok = True
        for key, value in data.items():
            if key not in defaults:
                self.add(f"{name}.{key}", "unknown key")
                ok = False
                continue
            try:
                kwargs[key] = _caster(defaults[key])(value)
            except TypeError as exc:
                self.add(f"{name}.{key}", str(exc))
                ok = False
        if not ok:
            return cls()
        try:
            return cls(**kwargs)
        except (ValueError, CqwaveError) as exc:
            self.add(name, str(exc))
            return cls()


def _params_section(col: _Collector, data: dict[str, Any]) -> ParamsSection:
    allowed = {"alpha1", "alpha3", "alpha5", "A", "c"}
    values: dict[str, float] = {}
    for key, value in data.items():
        if key not in allowed:
            col.add(f"params.{key}", "unknown key")
            continue
        try:
            values[key] = _as_float(value)
        except TypeError as exc:
            col.add(f"params.{key}", str(exc))
    c = values.get("c", ParamsSection.c)
    if c < 0.0:
        col.add("params.c", f"speed must be nonnegative, got {c}")
    alphas = [k for k in ("alpha1", "alpha3", "alpha5") if k in data]
    if alphas:
        if "A" in data:
            col.add("params.A", "give either A or alpha1/alpha3/alpha5, not both")
        for key in ("alpha1", "alpha3", "alpha5"):
            if key not in data:
                col.add(f"params.{key}", "required when any alpha is given")
        if len(alphas) < 3 or not all(k in values for k in alphas) or c < 0.0:
            return ParamsSection()
        try:
            raw = CubicQuinticParams(values["alpha1"], values["alpha3"], values["alpha5"])
            reduced = reduce(raw, c)
        except CqwaveError as exc:
            col.add("params", str(exc))
            return ParamsSection()
        return ParamsSection(A=reduced.A, c=c, raw=raw, gamma=reduced.gamma)
    A = values.get("A", ParamsSection.A)
    if not 0.0 < A < 1.0:
        col.add("params.A", f"must be in (0, 1), got {A}")
        return ParamsSection()
    return ParamsSection(A=A, c=max(c, 0.0))


def _dynamics_section(col: _Collector, data: dict[str, Any]) -> EvolutionConfig:
    # The file key is ``stride``.
    renamed = {}
    for key, value in data.items():
        if key == "monitor_stride":
            col.add("dynamics.monitor_stride", "unknown key (use stride)")
            continue
        renamed["monitor_stride" if key == "stride" else key] = value
    return col.build("dynamics", EvolutionConfig, renamed)


def _grid_section(col: _Collector, data: dict[str, Any]) -> GridSection:
    section = col.build("grid", GridSection, data)
    try:
        section.build()
    except CqwaveError as exc:
        col.add("grid", str(exc))
        return GridSection()
    return section


SECTIONS = ("params", "grid", "ansatz", "solver", "dynamics", "scan", "verify")


def _error_position(exc: yaml.YAMLError) -> tuple[int, int]:
    mark = getattr(exc, "problem_mark", None) or getattr(exc, "context_mark", None)
    if mark is None:
        return 0, 0
    return mark.line + 1, mark.column + 1


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run configuration.

    Raises:
        ParseError: malformed YAML (1-based line and column)
        ValidationError: every unknown key and violated constraint
    """
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        line, column = _error_position(exc)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ParseError(f"invalid YAML: {problem}", line=line, column=column) from exc
    col = _Collector()
    root = col.mapping("config", document)
    for key in root:
        if key not in SECTIONS and key != "seed":
            col.add(str(key), "unknown section")

    seed = root.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= MAX_SEED:
        col.add("seed", f"must be an unsigned 64-bit integer, got {seed!r}")
        seed = 0

    config = RunConfig(
        params=_params_section(col, col.mapping("params", root.get("params"))),
        grid=_grid_section(col, col.mapping("grid", root.get("grid"))),
        ansatz=col.build("ansatz", AnsatzSpec, col.mapping("ansatz", root.get("ansatz"))),
        solver=col.build("solver", SolverConfig, col.mapping("solver", root.get("solver"))),
        dynamics=_dynamics_section(col, col.mapping("dynamics", root.get("dynamics"))),
        scan=col.build("scan", ScanSection, col.mapping("scan", root.get("scan"))),
        verify=col.build("verify", VerifySection, col.mapping("verify", root.get("verify"))),
        seed=seed,
    )
    if col.errors:
        raise ValidationError(col.errors)
    return config


def load_config(path: Optional[Path | str]) -> RunConfig:
    """Defaults when ``path`` is None."""
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError([f"config: cannot read {path}: {exc.strerror}"]) from exc
    return parse_config(text)
