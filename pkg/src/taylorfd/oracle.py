"""Independent reference integrators and derivative cross-checks.

Three unrelated routes to the same quantities keep the main stepper honest:

* ``exact_taylor_step`` -- the classical Taylor step with *true* solution
  derivatives, obtained by propagating truncated power series (jets)
  through the right-hand side instead of symbolic differentiation.
* ``faa_di_bruno`` -- scalar higher derivatives of a composition as an
  explicit sum over partition multi-indices, for cross-checking the jets.
* ``rk_step`` -- explicit Runge-Kutta stepping from a Butcher tableau,
  including the 3-stage and 5-stage tableaus that reproduce the order-2
  and order-3 finite-difference Taylor steps exactly, and classical RK4.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

import numpy as np

from .core import DivergenceError, EvalCounter, OdeSystem, step
from .jets import JetSeries

__all__ = [
    "ButcherTableau",
    "CLASSICAL_RK4",
    "ORDER2_3STAGE",
    "ORDER3_5STAGE",
    "PartitionMultiIndex",
    "enumerate_partitions",
    "exact_taylor_step",
    "faa_di_bruno",
    "rk_step",
    "stability_factor",
]


# -- exact Taylor stepping via jets -----------------------------------------

def exact_taylor_step(sys: OdeSystem, v: np.ndarray, h: float, order: int,
                      counter: EvalCounter | None = None) -> np.ndarray:
    """One order-R Taylor step using true derivatives from jet recurrences.

    Solves the coefficient recurrence a_{l+1} = (f-series)_l / (l+1) for
    l = 0..R-1, then sums sum_l a_l h^l.  Requires ``sys.rhs_jet``.
    """
    if sys.rhs_jet is None:
        raise ValueError(f"system '{sys.label}' has no jet-capable right-hand side")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    coeffs = np.zeros((order + 1, sys.m))
    coeffs[0] = v
    for l in range(order):
        series = [JetSeries(coeffs[:l + 1, i]) for i in range(sys.m)]
        fs = sys.rhs_jet(series)
        if counter is not None:
            counter.add(1)
        coeffs[l + 1] = [f[l] / (l + 1) for f in fs]
    acc = coeffs[order].copy()
    for l in range(order - 1, -1, -1):
        acc *= h
        acc += coeffs[l]
    return acc


# -- partition sums (higher chain rule) --------------------------------------

@dataclass(frozen=True)
class PartitionMultiIndex:
    """Multiplicities s = (s_1..s_r) with sum j*s_j = r; s_j counts parts j."""

    s: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.s)

    @property
    def weight(self) -> int:
        """Multinomial r! / (s_1! ... s_r!)."""
        r = sum(j * sj for j, sj in enumerate(self.s, start=1))
        w = factorial(r)
        for sj in self.s:
            w //= factorial(sj)
        return w


def enumerate_partitions(r: int) -> list[PartitionMultiIndex]:
    """All partition multi-indices of r (complete and duplicate-free)."""
    if not 1 <= r <= 10:
        raise ValueError(f"partition order must be in 1..10, got {r}")
    out: list[PartitionMultiIndex] = []
    s = [0] * r

    def descend(remaining: int, largest: int) -> None:
        if remaining == 0:
            out.append(PartitionMultiIndex(tuple(s)))
            return
        for j in range(min(remaining, largest), 0, -1):
            s[j - 1] += 1
            descend(remaining - j, j)
            s[j - 1] -= 1

    descend(r, r)
    return out


def faa_di_bruno(f_derivs: Sequence[float], u_derivs: Sequence[float], r: int) -> float:
    """r-th time derivative of f(u(t)) from plain derivative values (m = 1).

    ``f_derivs[j]`` is f^(j) evaluated at u(t) for j = 0..r; ``u_derivs[j]``
    is u^(j+1)(t) for j = 0..r-1.  Returns the partition sum
    sum_s (r!/prod s_j!) f^(|s|) prod_j (u^(j)/j!)^s_j.
    """
    if len(f_derivs) < r + 1 or len(u_derivs) < r:
        raise ValueError(f"need f^(0..{r}) and u^(1..{r})")
    total = 0.0
    for part in enumerate_partitions(r):
        term = float(part.weight) * f_derivs[part.size]
        for j, sj in enumerate(part.s, start=1):
            if sj:
                term *= (u_derivs[j - 1] / factorial(j)) ** sj
        total += term
    return total


# -- Butcher-tableau Runge-Kutta ---------------------------------------------

@dataclass(frozen=True)
class ButcherTableau:
    """Explicit Runge-Kutta coefficients (A strictly lower-triangular)."""

    a: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self):
        s = len(self.b)
        if len(self.c) != s or len(self.a) != s or any(len(row) != s for row in self.a):
            raise ValueError("tableau arrays must all have the stage count as length")
        if any(self.a[i][j] != 0.0 for i in range(s) for j in range(i, s)):
            raise ValueError("tableau is not explicit (A not strictly lower-triangular)")
        if abs(sum(self.b) - 1.0) > 1e-14:
            raise ValueError(f"tableau weights sum to {sum(self.b)}, expected 1")

    @property
    def stages(self) -> int:
        return len(self.b)


def _tableau(a, b, c) -> ButcherTableau:
    return ButcherTableau(tuple(tuple(float(x) for x in row) for row in a),
                          tuple(float(x) for x in b), tuple(float(x) for x in c))


#: 3-stage scheme identical to the order-2 finite-difference Taylor step.
ORDER2_3STAGE = _tableau(
    a=[[0, 0, 0], [-1, 0, 0], [1, 0, 0]],
    b=[1, -1 / 4, 1 / 4],
    c=[0, -1, 1])

#: 5-stage scheme identical to the order-3 finite-difference Taylor step.
ORDER3_5STAGE = _tableau(
    a=[[0, 0, 0, 0, 0],
       [-1, 0, 0, 0, 0],
       [1, 0, 0, 0, 0],
       [-1, -1 / 4, 1 / 4, 0, 0],
       [1, -1 / 4, 1 / 4, 0, 0]],
    b=[2 / 3, -1 / 4, 1 / 4, 1 / 6, 1 / 6],
    c=[0, -1, 1, -1, 1])

#: Classical fourth-order Runge-Kutta.
CLASSICAL_RK4 = _tableau(
    a=[[0, 0, 0, 0], [1 / 2, 0, 0, 0], [0, 1 / 2, 0, 0], [0, 0, 1, 0]],
    b=[1 / 6, 1 / 3, 1 / 3, 1 / 6],
    c=[0, 1 / 2, 1 / 2, 1])


def rk_step(tab: ButcherTableau, sys: OdeSystem, v: np.ndarray, h: float,
            counter: EvalCounter | None = None) -> np.ndarray:
    """Standard explicit update v + h * sum_i b_i k_i."""
    v = np.atleast_1d(np.asarray(v))
    ks = []
    for i in range(tab.stages):
        vi = v.copy()
        for j in range(i):
            if tab.a[i][j] != 0.0:
                vi = vi + h * tab.a[i][j] * ks[j]
        with np.errstate(all="ignore"):
            k = np.asarray(sys.rhs(vi))
        if counter is not None:
            counter.add(1)
        if not np.isfinite(k).all():
            raise DivergenceError("right-hand side returned a non-finite value")
        ks.append(k)
    out = v.astype(np.result_type(v.dtype, np.float64), copy=True)
    for bi, k in zip(tab.b, ks):
        out = out + h * bi * k
    return out


# -- linear test equation -----------------------------------------------------

def stability_factor(order: int, z: complex) -> complex:
    """Amplification of one approximate Taylor step on u' = lambda*u at h*lambda = z.

    Runs the actual stepper in complex arithmetic (h = 1, lambda = z) and
    returns v1/v0; for this method the result is the truncated exponential
    sum_{l<=R} z^l / l!.
    """
    z = complex(z)
    sys = OdeSystem(m=1, rhs=lambda u: z * u, initial_state=np.array([1.0]),
                    t0=0.0, t_end=1.0, label="linear-test")
    out = step(sys, np.array([1.0 + 0.0j]), 1.0, order)
    return complex(out[0])
