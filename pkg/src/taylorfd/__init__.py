"""Arbitrary-order approximate Taylor integrators for autonomous ODE systems.

The stepper estimates solution time derivatives with centered finite
differences of the right-hand side evaluated on truncated Taylor
polynomials, so only evaluations of f are ever needed.  Companion modules
provide exact-Taylor and Runge-Kutta oracles, a computational cost model,
the benchmark problem catalog, and a convergence-study harness.
"""

from .core import (DerivTableau, DivergenceError, EvalCounter, IntegratorConfig,
                   OdeSystem, autonomize, derivative_tableau, integrate,
                   predicted_evals_per_step, step, taylor_eval)
from .stencil import FdStencil, apply_stencil, build_stencil

__all__ = [
    "DerivTableau",
    "DivergenceError",
    "EvalCounter",
    "FdStencil",
    "IntegratorConfig",
    "OdeSystem",
    "apply_stencil",
    "autonomize",
    "build_stencil",
    "derivative_tableau",
    "integrate",
    "predicted_evals_per_step",
    "step",
    "taylor_eval",
]

__version__ = "0.1.0"
