"""Weighted composition operators on Fock spaces: classification and numeric checks."""

from .core import (
    AffineSymbol,
    ExpQuadWeight,
    KernelWeight,
    TaylorSeries,
    TaylorWeight,
    Weight,
    parse_p,
)
from .iterates import (
    IterateCoefficients,
    IterateForm,
    iterate_coefficients,
    ratio_bound_margin,
    u_infinity,
    weight_iterate_closed,
    weight_iterate_product,
)

__all__ = [
    "AffineSymbol",
    "ExpQuadWeight",
    "IterateCoefficients",
    "IterateForm",
    "KernelWeight",
    "TaylorSeries",
    "TaylorWeight",
    "Weight",
    "iterate_coefficients",
    "parse_p",
    "ratio_bound_margin",
    "u_infinity",
    "weight_iterate_closed",
    "weight_iterate_product",
]

__version__ = "0.1.0"
