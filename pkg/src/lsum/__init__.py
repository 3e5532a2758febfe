"""Exact verification of L-summing rearrangements of lattice sums."""

__version__ = "0.1.0"

from .errors import (
    DimensionError,
    DomainError,
    EvaluationError,
    LSumError,
    MethodNotApplicable,
    MixedScalarError,
    NumericError,
    ParseError,
    UnboundAtomError,
    UnsupportedOrder,
)
from .exact import GAMMA, H0, ZETA2, ZETA3_ATOM, Atom, FormalPoly
from .expr import ArraySpec, parse, print_canonical
from .engine import (
    LSumEngine,
    LSumMethod,
    LSumReport,
    l_element_3d,
    l_element_general,
    l_element_strong,
    l_element_symmetric,
    total_sum,
    verify_rearrangement,
)
from .catalog import ENTRIES, ENTRY_IDS, run_catalog, verify_entry

__all__ = [
    "__version__",
    "Atom", "FormalPoly", "GAMMA", "H0", "ZETA2", "ZETA3_ATOM",
    "ArraySpec", "parse", "print_canonical",
    "LSumEngine", "LSumMethod", "LSumReport",
    "total_sum", "l_element_3d", "l_element_symmetric", "l_element_general", "l_element_strong",
    "verify_rearrangement",
    "ENTRIES", "ENTRY_IDS", "run_catalog", "verify_entry",
    "LSumError", "DomainError", "UnboundAtomError", "NumericError", "MixedScalarError", "ParseError",
    "EvaluationError", "DimensionError", "MethodNotApplicable", "UnsupportedOrder",
]
