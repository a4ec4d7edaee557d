"""Operation-count models for exact vs finite-difference Taylor stepping.

All quantities are exact (Python integers and fractions): these are models
of arithmetic work, not measurements.  ``c[r]`` is the assumed cost of one
r-th order derivative evaluation of a component of f; the rational-system
instantiation uses c_0 = 4m, c_1 = 3 and c_r = 2r for r >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

__all__ = [
    "CostRatio",
    "approx_cost",
    "rational_cost_ratio",
    "rational_cost_vector",
    "taylor_cost",
    "taylor_cost_lower",
]


def _check(m: int, order: int, c: Sequence[int]) -> None:
    if m < 1 or order < 1:
        raise ValueError(f"need m >= 1 and order >= 1, got ({m}, {order})")
    if len(c) < order:
        raise ValueError(f"need at least {order} per-derivative costs, got {len(c)}")
    if any(x < 0 for x in c):
        raise ValueError("per-derivative costs must be non-negative")


def taylor_cost(m: int, order: int, c: Sequence[int]) -> int:
    """Lower bound on the exact-Taylor operation count:
    m * sum_{r<R} (r*m^r + C(m+r-1, r) * (c_r + 1))."""
    _check(m, order, c)
    return m * sum(r * m ** r + comb(m + r - 1, r) * (c[r] + 1) for r in range(order))


def taylor_cost_lower(m: int, order: int, c: Sequence[int]) -> int:
    """Simplified bound for m > 1:
    (R-1)*m^R + m * sum_{r<R} C(m+r-1, r) * (c_r + 1)."""
    _check(m, order, c)
    if m <= 1:
        raise ValueError("the simplified bound applies to m > 1 only")
    return (order - 1) * m ** order + m * sum(comb(m + r - 1, r) * (c[r] + 1) for r in range(order))


def approx_cost(m: int, order: int, c0: int) -> int:
    """Finite-difference Taylor operation count: m * R^2 * (c_0 + 4)."""
    return m * order * order * (c0 + 4)


def rational_cost_vector(m: int, order: int) -> list[int]:
    """Per-derivative costs for the coupled rational system:
    c_0 = 4m, c_1 = 3, c_r = 2r for r >= 2."""
    return [4 * m if r == 0 else (3 if r == 1 else 2 * r) for r in range(order)]


@dataclass(frozen=True)
class CostRatio:
    """Exact cost quotient for the rational system, with its audit bounds.

    ``q`` is taylor_cost_lower / approx_cost.  The two lower-bound
    expressions follow the published chain:

        lower_full   = ((R-1) m^{R-1} + 4m + 4(m+1) + S) / (4 (m+1) R^2)
        lower_simple = ((R-1) m^{R-1} + 8m       + S) / (4 (m+1) R^2)

    with S = sum_{r=2}^{R-1} C(m+r-1, r) (2r + 1).  As printed,
    ``lower_full`` overshoots ``q`` by exactly 3 / (4 (m+1) R^2): the
    "4(m+1)" term should read "(4m+1)", under which the first bound is an
    exact equality; ``corrected_full`` carries that reading.
    """

    m: int
    order: int
    q: Fraction
    lower_full: Fraction
    lower_simple: Fraction
    corrected_full: Fraction


def rational_cost_ratio(m: int, order: int) -> CostRatio:
    """Quotient of the two cost models on the rational system, exactly."""
    if m < 1 or order < 2:
        raise ValueError(f"need m >= 1 and order >= 2, got ({m}, {order})")
    c = rational_cost_vector(m, order)
    if m == 1:
        # No simplified bound exists for m = 1 (and no advantage is claimed).
        q = Fraction(taylor_cost(1, order, c), approx_cost(1, order, c[0]))
        return CostRatio(m, order, q, q, q, q)
    q = Fraction(taylor_cost_lower(m, order, c), approx_cost(m, order, c[0]))
    tail = sum(comb(m + r - 1, r) * (2 * r + 1) for r in range(2, order))
    denom = 4 * (m + 1) * order * order
    head = (order - 1) * m ** (order - 1)
    lower_full = Fraction(head + 4 * m + 4 * (m + 1) + tail, denom)
    lower_simple = Fraction(head + 8 * m + tail, denom)
    corrected_full = Fraction(head + 4 * m + (4 * m + 1) + tail, denom)
    return CostRatio(m, order, q, lower_full, lower_simple, corrected_full)
