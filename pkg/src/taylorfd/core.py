"""Approximate Taylor stepping for autonomous first-order ODE systems.

An order-R step from state ``v`` estimates the time derivatives
``v1, ..., vR`` of the solution recursively: ``v1 = f(v)``, and each
``v{k+1}`` is a centered finite difference (order ``2*ceil((R-k)/2)``)
of ``f`` evaluated along the degree-k truncated Taylor polynomial built
from the derivatives already known.  The step then advances by the
truncated Taylor sum ``v + h*v1 + h^2/2 * v2 + ... + h^R/R! * vR``.

Only evaluations of ``f`` are needed -- no derivatives of ``f`` -- and the
per-step evaluation count grows quadratically with R (see
``predicted_evals_per_step``).  The polynomial value at offset 0 is ``v``
itself, so ``f(v)`` is computed once per step and reused by every
even-derivative stencil.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Sequence

import numpy as np

from .stencil import build_stencil

__all__ = [
    "DerivTableau",
    "DivergenceError",
    "EvalCounter",
    "IntegratorConfig",
    "OdeSystem",
    "autonomize",
    "derivative_tableau",
    "integrate",
    "predicted_evals_per_step",
    "step",
    "taylor_eval",
]


class DivergenceError(RuntimeError):
    """The right-hand side returned a non-finite value.

    Attributes set when raised from an integration run: ``step_index`` (zero
    based), ``t`` (start time of the failing step) and ``state`` (last finite
    state).
    """

    def __init__(self, message: str, *, step_index: int | None = None,
                 t: float | None = None, state: np.ndarray | None = None):
        super().__init__(message)
        self.step_index = step_index
        self.t = t
        self.state = state


@dataclass
class OdeSystem:
    """Autonomous system u' = f(u) with initial data and time span.

    ``rhs`` maps a state array of shape (m,) to its derivative, and must
    also accept a batch of states of shape (n, m), applying itself row-wise
    (numpy ufunc-style bodies get this for free).  ``exact``, if given, maps
    a time to the exact solution vector.  ``rhs_jet``, if given, maps a list
    of m truncated power series to the series of f(u) and enables the exact
    Taylor oracle.  Treat instances as immutable.
    """

    m: int
    rhs: Callable[[np.ndarray], np.ndarray]
    initial_state: np.ndarray
    t0: float
    t_end: float
    exact: Callable[[float], np.ndarray] | None = None
    rhs_jet: Callable[[list], list] | None = None
    label: str = ""

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"state dimension must be >= 1, got {self.m}")
        self.initial_state = np.atleast_1d(np.asarray(self.initial_state, dtype=float))
        if self.initial_state.shape != (self.m,):
            raise ValueError(f"initial state has shape {self.initial_state.shape}, expected ({self.m},)")
        if not self.t_end > self.t0:
            raise ValueError(f"need t_end > t0, got [{self.t0}, {self.t_end}]")
        out = np.asarray(self.rhs(self.initial_state))
        if out.shape != (self.m,):
            raise ValueError(f"rhs output has shape {out.shape}, expected ({self.m},)")
        if self.exact is not None:
            u0 = np.asarray(self.exact(self.t0))
            scale = np.maximum(1.0, np.abs(self.initial_state))
            if np.any(np.abs(u0 - self.initial_state) > 1e-12 * scale):
                raise ValueError("exact solution does not match the initial state at t0")


@dataclass
class IntegratorConfig:
    """Fixed-step run setup: order R and number of steps (h = span/n_steps)."""

    order: int
    n_steps: int
    eval_counting: bool = True

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"method order must be >= 1, got {self.order}")
        if self.n_steps < 1:
            raise ValueError(f"step count must be >= 1, got {self.n_steps}")


@dataclass
class EvalCounter:
    """Counts right-hand-side evaluations, in total and per completed step."""

    total: int = 0
    per_step: list[int] = field(default_factory=list)
    _mark: int = field(default=0, repr=False)

    def add(self, n: int = 1) -> None:
        self.total += n

    def begin_step(self) -> None:
        self._mark = self.total

    def end_step(self) -> None:
        self.per_step.append(self.total - self._mark)


@dataclass
class DerivTableau:
    """Derivative estimates v0..vR for one step, as rows of ``derivs``."""

    order: int
    derivs: np.ndarray  # shape (order+1, m); row l approximates d^l u / dt^l

    def __post_init__(self):
        if len(self.derivs) != self.order + 1:
            raise ValueError(f"tableau with order {self.order} needs {self.order + 1} rows")


def taylor_eval(derivs: Sequence[np.ndarray], dt: float) -> np.ndarray:
    """Evaluate sum_l derivs[l] * dt**l / l! by Horner accumulation."""
    k = len(derivs) - 1
    acc = np.asarray(derivs[k]) / factorial(k)
    for l in range(k - 1, -1, -1):
        acc = acc * dt + np.asarray(derivs[l]) / factorial(l)
    return acc


def _eval_rhs(sys: OdeSystem, u: np.ndarray, counter: EvalCounter | None) -> np.ndarray:
    out = np.asarray(sys.rhs(u))
    if counter is not None:
        counter.add(1 if u.ndim == 1 else u.shape[0])
    return out


def _scaled_tableau(sys: OdeSystem, v: np.ndarray, h: float, order: int,
                    counter: EvalCounter | None) -> np.ndarray:
    """Rows l = v_l / l! for l = 0..order (Taylor coefficients of the step).

    Raises DivergenceError if any right-hand-side output fed a non-finite
    value into the tableau (off-trajectory sample points may overflow or
    leave f's domain; numpy warnings are suppressed in favor of the check).
    """
    with np.errstate(all="ignore"):
        f0 = _eval_rhs(sys, v, counter)
        dtype = np.result_type(v.dtype, f0.dtype, np.float64)
        coeffs = np.empty((order + 1, v.shape[0]), dtype=dtype)
        coeffs[0] = v
        coeffs[1] = f0
        for k in range(1, order):
            st = build_stencil(k, (order - k + 1) // 2)
            offs = st.offsets_array
            nonzero = offs != 0
            rho = offs[nonzero] * h
            # Horner over the polynomial coefficients, broadcast across offsets
            vals = np.empty((rho.shape[0], coeffs.shape[1]), dtype=dtype)
            vals[:] = coeffs[k]
            for l in range(k - 1, -1, -1):
                vals *= rho[:, None]
                vals += coeffs[l]
            fvals = _eval_rhs(sys, vals, counter)
            if nonzero.all():
                sampled = fvals
            else:  # even k: the node at offset 0 is v itself, reuse f(v)
                sampled = np.empty((st.width, coeffs.shape[1]), dtype=fvals.dtype)
                sampled[nonzero] = fvals
                sampled[~nonzero] = f0
            coeffs[k + 1] = (st.weights_array @ sampled) / (h ** k * factorial(k + 1))
    # Non-finite rhs outputs propagate through the weighted sums (nan/inf are
    # absorbing), so one check on the assembled rows covers every evaluation.
    if not np.isfinite(coeffs).all():
        raise DivergenceError("right-hand side returned a non-finite value")
    return coeffs


def derivative_tableau(sys: OdeSystem, v: np.ndarray, h: float, order: int,
                       counter: EvalCounter | None = None) -> DerivTableau:
    """Estimate the solution derivatives v0..vR at state ``v``.

    Row 0 is ``v``, row 1 is ``f(v)`` bit-exactly; row k+1 is the order
    ``2*ceil((R-k)/2)`` centered difference of f along the degree-k Taylor
    polynomial, divided by h**k.
    """
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    if order < 1:
        raise ValueError(f"method order must be >= 1, got {order}")
    v = np.atleast_1d(np.asarray(v))
    coeffs = _scaled_tableau(sys, v, h, order, counter)
    scale = np.array([float(factorial(l)) for l in range(order + 1)])
    return DerivTableau(order, coeffs * scale[:, None])


def step(sys: OdeSystem, v: np.ndarray, h: float, order: int,
         counter: EvalCounter | None = None) -> np.ndarray:
    """Advance one step of size h: sum_l h^l/l! * v_l over a fresh tableau."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    if order < 1:
        raise ValueError(f"method order must be >= 1, got {order}")
    v = np.atleast_1d(np.asarray(v))
    coeffs = _scaled_tableau(sys, v, h, order, counter)
    acc = coeffs[order].copy()
    for l in range(order - 1, -1, -1):
        acc *= h
        acc += coeffs[l]
    return acc


def integrate(sys: OdeSystem, cfg: IntegratorConfig) -> tuple[list[tuple[float, np.ndarray]], EvalCounter]:
    """Run n_steps fixed steps from (t0, u0); returns the trajectory and counter.

    The trajectory has n_steps + 1 entries ``(t_n, state)`` with
    ``t_n = t0 + n*h``.  A non-finite rhs value aborts with a
    DivergenceError carrying the step index and the last finite state.
    """
    h = (sys.t_end - sys.t0) / cfg.n_steps
    counter = EvalCounter() if cfg.eval_counting else None
    v = sys.initial_state
    traj = [(sys.t0, v)]
    for n in range(cfg.n_steps):
        if counter is not None:
            counter.begin_step()
        try:
            v = step(sys, v, h, cfg.order, counter)
        except DivergenceError as e:
            raise DivergenceError(
                f"divergence at step {n} (t = {sys.t0 + n * h:g}) of '{sys.label}'",
                step_index=n, t=sys.t0 + n * h, state=traj[-1][1]) from e
        if counter is not None:
            counter.end_step()
        traj.append((sys.t0 + (n + 1) * h, v))
    return traj, counter if counter is not None else EvalCounter()


def autonomize(rhs_t: Callable[[float, np.ndarray], np.ndarray], u0: np.ndarray, t0: float, *,
               t_end: float, exact_t: Callable[[float], np.ndarray] | None = None,
               rhs_jet_t: Callable | None = None, label: str = "") -> OdeSystem:
    """Turn u' = f(t, u) into an autonomous system by adjoining tau' = 1.

    The returned system has dimension m + 1 with tau as the last component,
    tau(t0) = t0; ``rhs_t`` receives tau in place of t and must broadcast
    over leading axes just like an OdeSystem rhs.
    """
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    m = u0.shape[0]

    def rhs(x: np.ndarray) -> np.ndarray:
        du = rhs_t(x[..., m], x[..., :m])
        return np.concatenate([du, np.ones_like(x[..., m:m + 1])], axis=-1)

    exact = None
    if exact_t is not None:
        def exact(t: float) -> np.ndarray:
            return np.append(np.atleast_1d(exact_t(t)), t)

    rhs_jet = None
    if rhs_jet_t is not None:
        from . import jets

        def rhs_jet(series: list) -> list:
            tau = series[m]
            du = rhs_jet_t(tau, series[:m])
            return list(du) + [jets.JetSeries.constant(1.0, tau.order)]

    return OdeSystem(m=m + 1, rhs=rhs, initial_state=np.append(u0, t0),
                     t0=t0, t_end=t_end, exact=exact, rhs_jet=rhs_jet, label=label)


def predicted_evals_per_step(order: int) -> int:
    """Evaluations of f per step: minimal stencil widths with center reuse.

    1 for f(v), plus one evaluation per stencil node except the reused
    center node of even-derivative stencils.  Grows like order**2.
    """
    if order < 1:
        raise ValueError(f"method order must be >= 1, got {order}")
    total = 1
    for k in range(1, order):
        width = k + 2 * ((order - k + 1) // 2) - 1
        total += width - (1 if k % 2 == 0 else 0)
    return total
