"""Benchmark problem catalog with exact solutions where they exist.

Six problems: a scalar sine equation, a Riccati equation and a logarithmic
equation (both nonautonomous, run through ``autonomize``), an elastic
pendulum, a two-gene toggle switch, and a family of coupled rational
systems with seeded random coefficients.  The first three carry closed-form
solutions; the rest are measured against a reference computed with the same
method on a 10x refined grid (``refined_reference``).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets
from .core import (DivergenceError, IntegratorConfig, OdeSystem, autonomize,
                   integrate)

__all__ = [
    "CATALOG_LABELS",
    "ProblemSpec",
    "default_rational_coefficients",
    "load_rational_coefficients",
    "make_problem",
    "pendulum_energy",
    "pendulum_problem",
    "rational_system",
    "refined_reference",
    "sample_states",
    "save_rational_coefficients",
]

CATALOG_LABELS = ("sin", "riccati", "log", "pendulum", "toggle", "rational-m")

DEFAULT_RATIONAL_DIM = 6
DEFAULT_RATIONAL_SEED = 0


@dataclass
class ProblemSpec:
    """A catalog entry: the system plus how its error baseline is obtained."""

    label: str
    system: OdeSystem
    params: dict = field(default_factory=dict)
    exact_kind: str = "refined-reference"  # or "closed-form"
    source: str = "catalog"

    @property
    def has_closed_form(self) -> bool:
        return self.exact_kind == "closed-form"


# -- scalar problems ----------------------------------------------------------

def _sin_problem(t0: float = 0.0, u0: float = np.pi / 2, t_end: float = 1.0) -> ProblemSpec:
    # u' = sin(u); closed form 2*atan(exp(t - t0) * tan(u0/2)), continuous
    # branch through u0 (the arccot form usually quoted drops the factor 2
    # and fails both the initial condition and the ODE residual).
    tan_half = np.tan(u0 / 2)

    def exact(t: float) -> np.ndarray:
        return np.array([2.0 * np.arctan(np.exp(t - t0) * tan_half)])

    sys = OdeSystem(
        m=1, rhs=np.sin, initial_state=np.array([u0]), t0=t0, t_end=t_end,
        exact=exact, rhs_jet=lambda series: [jets.sin(series[0])], label="sin")
    return ProblemSpec("sin", sys, {"t0": t0, "u0": u0, "T": t_end}, "closed-form", "scalar-sine")


def _riccati_problem(t0: float = 2.0, u0: float = 1.0, t_end: float = 10.0) -> ProblemSpec:
    if not u0 < t0:
        raise ValueError(f"the Riccati closed form requires u0 < t0, got u0={u0}, t0={t0}")
    c = t0 + 1.0 / (u0 - t0)  # simplifies (1 + (u0-t0)*t0) / (u0-t0)

    def rhs_t(t, u):
        w = u[..., 0]
        return np.stack([w * w - 2.0 * t * w + t * t + 1.0], axis=-1)

    def rhs_jet_t(tau, series):
        u = series[0]
        return [u * u - 2.0 * (tau * u) + tau * tau + 1.0]

    def exact_u(t: float) -> float:
        return 1.0 / (c - t) + t

    sys = autonomize(rhs_t, np.array([u0]), t0, t_end=t_end,
                     exact_t=exact_u, rhs_jet_t=rhs_jet_t, label="riccati")
    return ProblemSpec("riccati", sys, {"t0": t0, "u0": u0, "T": t_end, "C": c},
                       "closed-form", "riccati")


def _log_problem(t0: float = 1.0, u0: float = 1.0, t_end: float = 8.0) -> ProblemSpec:
    if t0 <= 0 or u0 <= 0:
        raise ValueError("the logarithmic problem needs t0 > 0 and u0 > 0")
    c = (np.log(u0 / t0) - 1.0) / t0

    def rhs_t(t, u):
        w = u[..., 0] / t
        return np.stack([w * np.log(w)], axis=-1)

    def rhs_jet_t(tau, series):
        w = series[0] / tau
        return [w * jets.log(w)]

    def exact_u(t: float) -> float:
        return t * np.exp(c * t + 1.0)

    sys = autonomize(rhs_t, np.array([u0]), t0, t_end=t_end,
                     exact_t=exact_u, rhs_jet_t=rhs_jet_t, label="log")
    return ProblemSpec("log", sys, {"t0": t0, "u0": u0, "T": t_end, "C": c},
                       "closed-form", "logarithmic")


# -- systems ------------------------------------------------------------------

def pendulum_problem(k1: float = 100.0, k2: float = 1.0, g: float = 9.81,
                     r0: tuple[float, float] = (0.7, -0.8),
                     v0: tuple[float, float] = (0.1, -0.6),
                     t_end: float = 10.0) -> ProblemSpec:
    """Elastic pendulum: position (r1, r2), velocity (v1, v2).

    k1 is the cord elasticity, k2 the friction coefficient; with k2 = 0 the
    energy ``pendulum_energy`` is conserved.
    """

    def rhs(u):
        r1, r2, v1, v2 = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
        coef = k1 * (1.0 / np.sqrt(r1 * r1 + r2 * r2) - 1.0)
        return np.stack([v1, v2, coef * r1 - k2 * v1, coef * r2 - k2 * v2 - g], axis=-1)

    def rhs_jet(series):
        r1, r2, v1, v2 = series
        coef = k1 * (1.0 / jets.sqrt(r1 * r1 + r2 * r2) - 1.0)
        return [v1, v2, coef * r1 - k2 * v1, coef * r2 - k2 * v2 - g]

    sys = OdeSystem(m=4, rhs=rhs, initial_state=np.array([*r0, *v0]),
                    t0=0.0, t_end=t_end, rhs_jet=rhs_jet, label="pendulum")
    return ProblemSpec("pendulum", sys, {"k1": k1, "k2": k2, "g": g},
                       "refined-reference", "elastic-pendulum")


def pendulum_energy(state: np.ndarray, k1: float = 100.0, g: float = 9.81) -> float:
    """Mechanical energy of the elastic pendulum (conserved when k2 = 0)."""
    r1, r2, v1, v2 = state
    stretch = np.sqrt(r1 * r1 + r2 * r2) - 1.0
    return 0.5 * (v1 * v1 + v2 * v2) + g * r2 + 0.5 * k1 * stretch * stretch


def toggle_problem(k_syn: float = 10.0, n_hill: float = 2.0, t_end: float = 10.0) -> ProblemSpec:
    """Two-gene toggle switch; all rate constants 1 except the mRNA synthesis
    gains ``k_syn`` and the Hill exponents ``n_hill``."""

    def rhs(u):
        m_l, p_l, m_r, p_r = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
        return np.stack([k_syn / (1.0 + p_r ** n_hill) - m_l,
                         m_l - p_l,
                         k_syn / (1.0 + p_l ** n_hill) - m_r,
                         m_r - p_r], axis=-1)

    def rhs_jet(series):
        m_l, p_l, m_r, p_r = series
        return [k_syn / (1.0 + jets.power(p_r, n_hill)) - m_l,
                m_l - p_l,
                k_syn / (1.0 + jets.power(p_l, n_hill)) - m_r,
                m_r - p_r]

    sys = OdeSystem(m=4, rhs=rhs, initial_state=np.array([0.5, 0.4, 0.5, 0.3]),
                    t0=0.0, t_end=t_end, rhs_jet=rhs_jet, label="toggle")
    return ProblemSpec("toggle", sys, {"k_syn": k_syn, "n_hill": n_hill},
                       "refined-reference", "toggle-switch")


def default_rational_coefficients(m: int, seed: int = DEFAULT_RATIONAL_SEED) -> tuple[np.ndarray, np.ndarray]:
    """Reproducible coefficient matrices, entries uniform in [1, 2].

    Positive entries keep every denominator bounded away from zero along
    trajectories started at u = 1.
    """
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(1.0, 2.0, size=(m, m))
    beta = rng.uniform(1.0, 2.0, size=(m, m))
    return alpha, beta


def rational_system(m: int, alpha: np.ndarray, beta: np.ndarray,
                    t_end: float = 10.0, label: str | None = None) -> ProblemSpec:
    """Coupled rational system u_i' = (alpha_i . u) / (beta_i . u), u_i(0) = 1."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != (m, m) or beta.shape != (m, m):
        raise ValueError(f"coefficient matrices must be {m}x{m}")

    def rhs(u):
        den = u @ beta.T
        if np.abs(den).min() < 1e-12:
            raise DivergenceError("rational system denominator fell below 1e-12")
        return (u @ alpha.T) / den

    def rhs_jet(series):
        out = []
        for i in range(m):
            num = series[0] * alpha[i, 0]
            den = series[0] * beta[i, 0]
            for j in range(1, m):
                num = num + series[j] * alpha[i, j]
                den = den + series[j] * beta[i, j]
            out.append(num / den)
        return out

    label = label or f"rational-{m}"
    sys = OdeSystem(m=m, rhs=rhs, initial_state=np.ones(m), t0=0.0, t_end=t_end,
                    rhs_jet=rhs_jet, label=label)
    return ProblemSpec(label, sys, {"m": m, "alpha": alpha, "beta": beta},
                       "refined-reference", "rational-system")


# -- catalog ------------------------------------------------------------------

def make_problem(label: str, *, m: int | None = None,
                 seed: int = DEFAULT_RATIONAL_SEED,
                 coefficients: tuple[np.ndarray, np.ndarray] | None = None) -> ProblemSpec:
    """Build a fully parameterized catalog problem by label.

    ``rational-m`` takes the dimension from ``m`` (default 6); labels like
    ``rational-4`` encode it directly.  ``seed`` / ``coefficients`` only
    affect the rational family.
    """
    if label == "sin":
        return _sin_problem()
    if label == "riccati":
        return _riccati_problem()
    if label == "log":
        return _log_problem()
    if label == "pendulum":
        return pendulum_problem()
    if label == "toggle":
        return toggle_problem()
    if label.startswith("rational"):
        suffix = label.partition("-")[2]
        dim = m if m is not None else (int(suffix) if suffix.isdigit() else DEFAULT_RATIONAL_DIM)
        if coefficients is not None:
            alpha, beta = coefficients
        else:
            alpha, beta = default_rational_coefficients(dim, seed)
        spec = rational_system(dim, alpha, beta)
        spec.params["seed"] = seed
        return spec
    raise ValueError(f"unknown problem label '{label}'; known: {', '.join(CATALOG_LABELS)}")


def save_rational_coefficients(path: str, alpha: np.ndarray, beta: np.ndarray) -> None:
    """Write the coefficient matrices as CSV rows (kind, i, j, value)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "i", "j", "value"])
        for kind, mat in (("alpha", alpha), ("beta", beta)):
            for i in range(mat.shape[0]):
                for j in range(mat.shape[1]):
                    writer.writerow([kind, i, j, f"{mat[i, j]:.17g}"])


def load_rational_coefficients(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Read matrices written by ``save_rational_coefficients``."""
    entries: dict[str, dict[tuple[int, int], float]] = {"alpha": {}, "beta": {}}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            entries[row["kind"]][(int(row["i"]), int(row["j"]))] = float(row["value"])
    mats = []
    for kind in ("alpha", "beta"):
        data = entries[kind]
        dim = max(i for i, _ in data) + 1
        mat = np.empty((dim, dim))
        for (i, j), val in data.items():
            mat[i, j] = val
        mats.append(mat)
    return mats[0], mats[1]


# -- reference protocol and test-state sampling --------------------------------

def refined_reference(spec: ProblemSpec, order: int, n_steps: int):
    """Reference trajectory for problems without a closed form.

    Integrates the same approximate Taylor method with 10x the finest step
    count of the study; the endpoint serves as the error baseline.
    """
    if spec.has_closed_form:
        raise ValueError(f"'{spec.label}' has a closed-form solution; no refined reference needed")
    traj, _ = integrate(spec.system, IntegratorConfig(order, 10 * n_steps, eval_counting=False))
    return traj


def sample_states(spec: ProblemSpec, count: int, seed: int = 0) -> np.ndarray:
    """Random states near the initial condition, inside the problem's domain.

    Componentwise perturbations of up to 5% of max(1, |u0_i|) keep
    logarithms, square roots and rational denominators well defined for
    every catalog problem.
    """
    rng = np.random.default_rng(seed)
    u0 = spec.system.initial_state
    scale = 0.05 * np.maximum(1.0, np.abs(u0))
    return u0 + rng.uniform(-1.0, 1.0, size=(count, u0.size)) * scale
