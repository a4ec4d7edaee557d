"""Truncated power-series (jet) arithmetic for the exact Taylor oracle.

A ``JetSeries`` holds the Taylor coefficients ``a_0, ..., a_K`` of one
scalar quantity, representing ``sum_l a_l * t**l`` truncated at order K.
Arithmetic and the elementary functions below propagate coefficients by the
standard O(K^2) recurrences, so composing them through a right-hand side
yields the series of ``f(u(t))`` without any symbolic differentiation.

Coefficient ``l`` of every operation depends only on input coefficients
``0..l``, which is what the derivative-recurrence in the exact Taylor
stepper relies on.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["JetSeries", "cos", "exp", "log", "power", "sin", "sin_cos", "sqrt"]


class JetSeries:
    """Taylor coefficients a_0..a_K of a scalar quantity."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("jet coefficients must form a non-empty 1-d sequence")

    @classmethod
    def constant(cls, value: float, order: int) -> "JetSeries":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value: float, order: int) -> "JetSeries":
        """Series of ``value + t``, the expansion variable itself."""
        c = np.zeros(order + 1)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __getitem__(self, l: int) -> float:
        return float(self.coeffs[l])

    def __len__(self) -> int:
        return self.coeffs.size

    def __repr__(self) -> str:
        return f"JetSeries({list(self.coeffs)})"

    def evaluate(self, dt: float) -> float:
        """Horner evaluation of the truncated series at offset dt."""
        acc = 0.0
        for a in self.coeffs[::-1]:
            acc = acc * dt + a
        return float(acc)

    def _coerce(self, other) -> "JetSeries":
        if isinstance(other, JetSeries):
            if other.order != self.order:
                raise ValueError(f"jet truncation orders differ: {self.order} vs {other.order}")
            return other
        return JetSeries.constant(float(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return JetSeries(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return JetSeries(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        return JetSeries(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        return JetSeries(np.convolve(self.coeffs, other.coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.coeffs[0] == 0.0:
            raise ZeroDivisionError("jet division by a series with zero constant term")
        a, b = self.coeffs, other.coeffs
        c = np.empty_like(a)
        for k in range(a.size):
            c[k] = (a[k] - np.dot(c[:k], b[k:0:-1])) / b[0]
        return JetSeries(c)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, alpha):
        return power(self, alpha)


def exp(x: JetSeries) -> JetSeries:
    a = x.coeffs
    e = np.empty_like(a)
    e[0] = math.exp(a[0])
    for k in range(1, a.size):
        # e' = a' e  =>  k e_k = sum_{j=1..k} j a_j e_{k-j}
        e[k] = np.dot(np.arange(1, k + 1) * a[1:k + 1], e[k - 1::-1]) / k
    return JetSeries(e)


def log(x: JetSeries) -> JetSeries:
    a = x.coeffs
    if a[0] <= 0.0:
        raise ValueError(f"jet log requires a positive constant term, got {a[0]}")
    out = np.empty_like(a)
    out[0] = math.log(a[0])
    for k in range(1, a.size):
        # (log a)' = a'/a  =>  k a_0 l_k = k a_k - sum_{j=1..k-1} j l_j a_{k-j}
        s = np.dot(np.arange(1, k) * out[1:k], a[k - 1:0:-1]) if k > 1 else 0.0
        out[k] = (a[k] - s / k) / a[0]
    return JetSeries(out)


def sqrt(x: JetSeries) -> JetSeries:
    a = x.coeffs
    if a[0] <= 0.0:
        raise ValueError(f"jet sqrt requires a positive constant term, got {a[0]}")
    s = np.empty_like(a)
    s[0] = math.sqrt(a[0])
    for k in range(1, a.size):
        conv = np.dot(s[1:k], s[k - 1:0:-1]) if k > 1 else 0.0
        s[k] = (a[k] - conv) / (2.0 * s[0])
    return JetSeries(s)


def power(x: JetSeries, alpha: float) -> JetSeries:
    """Series of x**alpha for real alpha; needs a positive constant term."""
    a = x.coeffs
    if a[0] <= 0.0:
        raise ValueError(f"jet power requires a positive constant term, got {a[0]}")
    p = np.empty_like(a)
    p[0] = a[0] ** alpha
    for k in range(1, a.size):
        # k a_0 p_k = sum_{j=1..k} ((alpha+1) j - k) a_j p_{k-j}
        j = np.arange(1, k + 1)
        p[k] = np.dot(((alpha + 1.0) * j - k) * a[1:k + 1], p[k - 1::-1]) / (k * a[0])
    return JetSeries(p)


def sin_cos(x: JetSeries) -> tuple[JetSeries, JetSeries]:
    """Coupled sine/cosine series (each drives the other's recurrence)."""
    a = x.coeffs
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[0] = math.sin(a[0])
    c[0] = math.cos(a[0])
    for k in range(1, a.size):
        ja = np.arange(1, k + 1) * a[1:k + 1]
        s[k] = np.dot(ja, c[k - 1::-1]) / k
        c[k] = -np.dot(ja, s[k - 1::-1]) / k
    return JetSeries(s), JetSeries(c)


def sin(x: JetSeries) -> JetSeries:
    return sin_cos(x)[0]


def cos(x: JetSeries) -> JetSeries:
    return sin_cos(x)[1]
