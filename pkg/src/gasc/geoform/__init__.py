"""Canonical representation of geometric problems plus dialect filters."""

from .model import (
    CONJECTURE_ARITY,
    OPERATIONS,
    Conjecture,
    Construction,
    FreePoint,
    GeoProblem,
    Step,
    validate_problem,
)
from .gclc import emit_gclc, parse_gclc_subset
from .ggb import emit_ggb_script
from .exchange import read_exchange, read_exchange_file, write_exchange, write_exchange_file

__all__ = [
    "CONJECTURE_ARITY",
    "OPERATIONS",
    "Conjecture",
    "Construction",
    "FreePoint",
    "GeoProblem",
    "Step",
    "validate_problem",
    "parse_gclc_subset",
    "emit_gclc",
    "emit_ggb_script",
    "read_exchange",
    "read_exchange_file",
    "write_exchange",
    "write_exchange_file",
]
