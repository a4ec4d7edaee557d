"""Centered finite-difference operators with exact rational weights.

A stencil ``(p, q)`` acts on samples of a smooth function ``g`` taken at
integer multiples of a spacing ``h`` and estimates the ``p``-th derivative
with even accuracy order ``2q``::

    sum_i w_i * g(a + i*h) / h**p  =  g^(p)(a) + O(h**(2q))

The node set is the minimal symmetric one: ``{-s, ..., s}`` with
``s = q + p/2 - 1`` for even ``p``, and ``{-s, ..., s} \\ {0}`` with
``s = q + (p-1)/2`` for odd ``p``; both contain exactly ``p + 2q - 1``
nodes.  Weights solve the moment conditions

    sum_i w_i * i**s = p! * delta(s, p),   s = 0, ..., p + 2q - 2,

exactly in rational arithmetic (the moment at ``s = p + 2q - 1`` then
vanishes automatically by the symmetry ``w_{-i} = (-1)**p w_i``, which is
what lifts the accuracy to the even order ``2q``).  Exact solving avoids
the ill-conditioning of the float Vandermonde system for wide stencils.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping

import numpy as np

__all__ = [
    "FdStencil",
    "MissingOffsetError",
    "StencilWidthError",
    "MAX_STENCIL_WIDTH",
    "apply_stencil",
    "build_stencil",
]

# Node-count limit for cached stencils; wide requests are almost always bugs.
MAX_STENCIL_WIDTH = 33


class StencilWidthError(ValueError):
    """Requested stencil needs more nodes than the configured maximum."""


class MissingOffsetError(ValueError):
    """Grid values handed to apply_stencil do not cover every stencil node."""


@dataclass(frozen=True)
class FdStencil:
    """Immutable centered difference operator for one (p, q) pair.

    Attributes:
        deriv_order: p, the derivative being approximated.
        half_order: q, half the accuracy order (error is O(h**2q)).
        offsets: stencil nodes in increasing order, units of h.
        weights: exact rational weights, aligned with ``offsets``.
    """

    deriv_order: int
    half_order: int
    offsets: tuple[int, ...]
    weights: tuple[Fraction, ...]
    # float mirrors, computed once at construction (compare/hash by exact data)
    offsets_array: np.ndarray = field(compare=False, repr=False, default=None)
    weights_array: np.ndarray = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "offsets_array", np.array(self.offsets, dtype=np.int64))
        object.__setattr__(self, "weights_array", np.array([float(w) for w in self.weights]))

    @property
    def width(self) -> int:
        return len(self.offsets)

    def moment(self, s: int) -> Fraction:
        """Exact moment sum_i w_i * i**s."""
        return sum((w * (i ** s) for i, w in zip(self.offsets, self.weights)), Fraction(0))


def _node_set(p: int, q: int) -> tuple[int, ...]:
    if p % 2 == 0:
        s = q + p // 2 - 1
        return tuple(range(-s, s + 1))
    s = q + (p - 1) // 2
    return tuple(i for i in range(-s, s + 1) if i != 0)


def _solve_moments(p: int, nodes: tuple[int, ...]) -> tuple[Fraction, ...]:
    """Exact Gaussian elimination on the moment-condition Vandermonde system."""
    n = len(nodes)
    rows = [[Fraction(node) ** s for node in nodes] + [Fraction(factorial(p)) if s == p else Fraction(0)]
            for s in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


_cache: dict[tuple[int, int], FdStencil] = {}
_cache_lock = threading.Lock()


def build_stencil(p: int, q: int, *, max_width: int | None = None) -> FdStencil:
    """Return the cached minimal symmetric stencil for (p, q).

    Construction happens at most once per key, guarded by a lock; the
    returned stencil is immutable and safe to share across threads.

    Raises:
        StencilWidthError: if p + 2q - 1 exceeds the width limit.
        ValueError: if p or q is not a positive integer.
    """
    if p < 1 or q < 1 or p != int(p) or q != int(q):
        raise ValueError(f"derivative order and half accuracy order must be positive integers, got ({p}, {q})")
    p, q = int(p), int(q)
    width = p + 2 * q - 1
    limit = MAX_STENCIL_WIDTH if max_width is None else max_width
    if width > limit:
        raise StencilWidthError(f"stencil ({p}, {q}) needs {width} nodes, limit is {limit}")
    key = (p, q)
    st = _cache.get(key)
    if st is None:
        with _cache_lock:
            st = _cache.get(key)
            if st is None:
                nodes = _node_set(p, q)
                st = FdStencil(p, q, nodes, _solve_moments(p, nodes))
                _cache[key] = st
    return st


def cached_stencils() -> tuple[FdStencil, ...]:
    """Snapshot of every stencil built so far."""
    return tuple(_cache.values())


def apply_stencil(st: FdStencil, grid_values: Mapping[int, "np.ndarray | float"], h: float) -> np.ndarray:
    """Apply ``st`` to sampled values: (sum_i w_i * grid_values[i]) / h**p.

    ``grid_values`` maps each stencil offset to the sampled value (scalar or
    m-vector).  Weights are used in their float form, converted once when the
    stencil was built.

    Raises:
        MissingOffsetError: if any stencil offset has no value.
        ValueError: if h <= 0.
    """
    if h <= 0:
        raise ValueError(f"grid spacing must be positive, got {h}")
    try:
        vals = np.asarray([grid_values[i] for i in st.offsets])
    except KeyError as e:
        raise MissingOffsetError(f"no grid value for stencil offset {e.args[0]}") from e
    return st.weights_array @ vals / h ** st.deriv_order
