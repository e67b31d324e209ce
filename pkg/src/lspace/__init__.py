"""Lindenmayer-system grammars: parallel derivation, classification and analysis."""

from .errors import LSpaceError
from .grammar import (
    LGrammar,
    derive,
    derive_sequential,
    derive_tree,
    parse_grammar,
    render,
    step,
    symbols,
    validate,
)
from .mappings import ID, M, MN, N, Involution, MappingExpr, apply_expr, compose, mirror, negative

__all__ = [
    "LSpaceError", "LGrammar", "derive", "derive_sequential", "derive_tree", "parse_grammar",
    "render", "step", "symbols", "validate", "ID", "M", "MN", "N", "Involution", "MappingExpr",
    "apply_expr", "compose", "mirror", "negative",
]
__version__ = "0.1.0"
