"""Molien series and low-degree invariants of SO(3) wr Z2 on (2l+1) x (2l+1) matrices."""

from .molienweyl import full_series, gamma0_series, gamma1_series, su2_label_table
from .seriesring import (
    CyclotomicDenominator,
    IntPolynomial,
    TruncatedSeries,
    eval_at_one,
    is_palindromic,
    reconstruct_numerator,
)

__all__ = [
    "CyclotomicDenominator",
    "IntPolynomial",
    "TruncatedSeries",
    "eval_at_one",
    "full_series",
    "gamma0_series",
    "gamma1_series",
    "is_palindromic",
    "reconstruct_numerator",
    "su2_label_table",
]
