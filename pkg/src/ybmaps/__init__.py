"""Exact verification of Yang-Baxter maps obtained from Darboux matrices."""
from .catalog import (
    MAP_NAMES,
    REGISTRY,
    MapDescriptor,
    PairState,
    get_map,
    vector_nls,
    vector_z2,
)
from .errors import SingularLocusError, YBError
from .exact import ExactScalar, to_exact
from .lax import LAX_PAIRS, build_lax, check_refactorisation
from .leaves import eval_dihedral4_implicit, eval_dnls4_implicit, iterate_orbit
from .verify import CHECKS, CheckReport, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "CHECKS", "CheckReport", "ExactScalar", "LAX_PAIRS", "MAP_NAMES", "MapDescriptor",
    "PairState", "REGISTRY", "SingularLocusError", "YBError", "build_lax",
    "check_refactorisation", "eval_dihedral4_implicit", "eval_dnls4_implicit", "get_map",
    "iterate_orbit", "run_check", "run_suite", "to_exact", "vector_nls", "vector_z2",
]
