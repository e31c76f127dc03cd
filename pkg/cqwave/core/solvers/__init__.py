"""Mountain-pass construction and critical-point solvers on the slab."""

from cqwave.core.solvers.ansatz import AnsatzSpec, make_ansatz, winding_number
from cqwave.core.solvers.config import SolveReport, SolverConfig
from cqwave.core.solvers.continuation import (
    ContinuationPoint,
    ContinuationResult,
    continuation,
    continuity_gaps,
    solve,
)
from cqwave.core.solvers.descent import descend
from cqwave.core.solvers.mountain_pass import (
    EndpointResult,
    find_negative_endpoint,
    golden_section_max,
    path_max,
    path_point,
    path_values,
)
from cqwave.core.solvers.newton import newton_refine

__all__ = [
    "AnsatzSpec",
    "ContinuationPoint",
    "ContinuationResult",
    "EndpointResult",
    "SolveReport",
    "SolverConfig",
    "continuation",
    "continuity_gaps",
    "descend",
    "find_negative_endpoint",
    "golden_section_max",
    "make_ansatz",
    "newton_refine",
    "path_max",
    "path_point",
    "path_values",
    "solve",
    "winding_number",
]
