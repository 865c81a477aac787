"""Exact symbolic algebra: classical polynomials, Poisson brackets, quantization
rules, and a noncommutative algebra with scalar commutators."""
from .parser import parse_expression, tokenize
from .polys import (
    COMMUTING,
    HBAR,
    NONCOMMUTING,
    SCALAR,
    ClassicalPoly,
    CommutationSpec,
    NCPoly,
    coef,
    coef_complex,
    default_order,
    nc_commutator,
    nc_normal_form,
    nc_to_matrix,
)
from .rules import (
    commutative_image,
    hermitize_unsound,
    is_simple,
    monomial_str,
    poisson,
    quantize,
)

__all__ = [
    "COMMUTING", "HBAR", "NONCOMMUTING", "SCALAR",
    "ClassicalPoly", "CommutationSpec", "NCPoly",
    "coef", "coef_complex", "default_order",
    "nc_commutator", "nc_normal_form", "nc_to_matrix",
    "parse_expression", "tokenize",
    "commutative_image", "hermitize_unsound", "is_simple", "monomial_str",
    "poisson", "quantize",
]
