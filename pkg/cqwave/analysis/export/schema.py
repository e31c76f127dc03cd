"""Column layouts of the CSV/Parquet tables written by the CLI."""

from typing import Any

FLOAT = "float64"
INT = "int64"
BOOL = "bool"
STRING = "string"

DIAGNOSTICS_COLUMNS = {
    "E": FLOAT,
    "P": FLOAT,
    "Ic": FLOAT,
    "Apoho": FLOAT,
    "Bpoho": FLOAT,
    "residual_norm": FLOAT,
    "sup_mod": FLOAT,
    "pohozaev_residual": FLOAT,
}

TABLES: dict[str, dict[str, str]] = {
    # reduce
    "reduce": {
        "A": FLOAT,
        "gamma": FLOAT,
        "vs": FLOAT,
        "c": FLOAT,
        "r1": FLOAT,
        "r2": FLOAT,
        "r3": FLOAT,
        "rbar": FLOAT,
        "C_A": FLOAT,
    },
    "potential_profile": {"u": FLOAT, "W": FLOAT, "W_GP": FLOAT},
    "critical_points": {"u": FLOAT, "kind": STRING},
    # solve
    "solve_summary": {
        "c": FLOAT,
        "A": FLOAT,
        "method": STRING,
        "converged": BOOL,
        "fallback_used": BOOL,
        "iterations": INT,
        **DIAGNOSTICS_COLUMNS,
    },
    "solve_history": {
        "run": STRING,
        "iteration": INT,
        "residual_norm": FLOAT,
        "omega": FLOAT,
        "step": FLOAT,
    },
    "solve_notes": {"run": STRING, "iteration": INT, "note": STRING},
    "continuation": {
        "c": FLOAT,
        "ok": BOOL,
        "converged": BOOL,
        "iterations": INT,
        "error": STRING,
        **DIAGNOSTICS_COLUMNS,
    },
    # evolve
    "trajectory": {
        "t": FLOAT,
        "E": FLOAT,
        "P": FLOAT,
        "sup_mod": FLOAT,
        "bdry_dev": FLOAT,
    },
    "propagation": {"t": FLOAT, "shift": FLOAT},
    # diagnose
    "diagnostics": DIAGNOSTICS_COLUMNS,
    # verify
    "verify": {
        "check": STRING,
        "passed": BOOL,
        "applicable": BOOL,
        "margin": FLOAT,
        "context": STRING,
    },
    # scan
    "constants_scan": {
        "A": FLOAT,
        "c": FLOAT,
        "subsonic": BOOL,
        "r1": FLOAT,
        "r2": FLOAT,
        "r3": FLOAT,
        "rbar": FLOAT,
        "ordering": BOOL,
        "keylem_margin": FLOAT,
    },
    "thresholds": {
        "A": FLOAT,
        "sound_speed": FLOAT,
        "c_star_grid": FLOAT,
        "c_star_closed": FLOAT,
        "c_star_root": FLOAT,
    },
    "endpoints": {
        "A": FLOAT,
        "c": FLOAT,
        "family": STRING,
        "found": BOOL,
        "lagrangian": FLOAT,
        "momentum": FLOAT,
        "t_star": FLOAT,
        "evaluations": INT,
    },
}


def columns(table: str) -> list[str]:
    return list(TABLES[table])


def arrow_schema(table: str) -> Any:
    """pyarrow schema of ``table``; needs the analysis extra."""
    import pyarrow as pa

    types = {FLOAT: pa.float64(), INT: pa.int64(), BOOL: pa.bool_(), STRING: pa.string()}
    return pa.schema([(name, types[kind]) for name, kind in TABLES[table].items()])
