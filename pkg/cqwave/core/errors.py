"""Exception hierarchy shared by the numerical modules and the CLI.

Every error carries the process exit code the CLI returns when it escapes a
subcommand. One base class per module keeps the codes distinct.
"""

from typing import Any, Optional


class CqwaveError(Exception):
    """Base class for all cqwave errors."""

    exit_code: int = 1


# --- configuration -------------------------------------------------------


class ConfigError(CqwaveError):
    exit_code = 2


class ParseError(ConfigError):
    """Configuration text is not well-formed."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(ConfigError):
    """One or more configuration values violate their constraints."""

    def __init__(self, errors: list[str]):
        super().__init__("invalid configuration:\n  " + "\n  ".join(errors))
        self.errors = list(errors)


# --- params --------------------------------------------------------------


class ParamsError(CqwaveError):
    exit_code = 3


class InvalidCoefficients(ParamsError, ValueError):
    pass


class DiscriminantNegative(ParamsError):
    pass


class DegenerateRoots(ParamsError):
    pass


class AOutOfRange(ParamsError):
    pass


class NotNormalized(ParamsError):
    pass


# --- grid ----------------------------------------------------------------


class GridError(CqwaveError):
    exit_code = 4


class BadResolution(GridError, ValueError):
    pass


class UnsupportedDimension(GridError, ValueError):
    pass


class BoundaryViolation(GridError):
    pass


class SnapshotFormatError(GridError):
    pass


# --- solvers -------------------------------------------------------------


class SolverError(CqwaveError):
    exit_code = 5


class FamilyDimensionMismatch(SolverError, ValueError):
    pass


class NotFound(SolverError):
    """No field with negative Lagrangian was found within the budget."""

    def __init__(self, message: str, best_lagrangian: float):
        super().__init__(message)
        self.best_lagrangian = best_lagrangian


class Stagnation(SolverError):
    """Line search could not make progress. Carries the best-so-far report."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class LinearSolveFailure(SolverError):
    def __init__(self, message: str, info: Optional[int] = None):
        super().__init__(message)
        self.info = info


class Divergence(SolverError):
    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


# --- dynamics ------------------------------------------------------------


class DynamicsError(CqwaveError):
    exit_code = 6


class BlowupDetected(DynamicsError):
    def __init__(self, time: float, sup_mod: float, bound: float):
        super().__init__(
            f"sup |psi| = {sup_mod:.6g} exceeds {bound:.6g} at t = {time:.6g}"
        )
        self.time = time
        self.sup_mod = sup_mod
        self.bound = bound
