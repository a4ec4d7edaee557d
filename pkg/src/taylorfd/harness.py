"""Convergence-study runner: sweeps, order fitting, accounting, CSV output.

A study integrates one problem with one method over a geometric ladder of
step counts, measures the endpoint error against the closed-form solution
(or a 10x-refined same-method reference), and fits the convergence order by
ordinary least squares on (log h, log error).  Rows whose error sits at the
rounding floor are recorded but excluded from the fit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .core import DivergenceError, EvalCounter, IntegratorConfig, integrate
from .problems import ProblemSpec, make_problem

__all__ = [
    "METHODS",
    "ComparisonResult",
    "ConvergenceReport",
    "RungRow",
    "StudySpec",
    "compare_methods",
    "default_ladder",
    "emit_csv",
    "fit_slope",
    "method_display",
    "run_study",
]

METHODS = ("approx-taylor", "exact-taylor", "rk4", "rk-tableau")

#: Error floor coefficient: errors below floor_coeff * max(1, |u_ref|) are
#: treated as rounding noise and excluded from slope fits.
FLOOR_COEFF = 1e-13


@dataclass
class StudySpec:
    """One convergence sweep: problem, method, order and step-count ladder."""

    problem: str
    method: str
    order: int
    ladder: list[int]
    seed: int = 0
    repeats: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method '{self.method}'; known: {', '.join(METHODS)}")
        if len(self.ladder) < 4:
            raise ValueError("need at least 4 ladder rungs to fit a slope")
        if any(b <= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise ValueError("ladder step counts must be strictly increasing")
        if self.order < 1:
            raise ValueError(f"method order must be >= 1, got {self.order}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")


@dataclass
class RungRow:
    h: float
    n_steps: int
    error: float  # nan when the rung diverged
    evals: int
    time_ns: int
    diverged: bool = False


@dataclass
class ConvergenceReport:
    problem: str
    method: str
    order: int
    seed: int
    rows: list[RungRow] = field(default_factory=list)
    floor: float = 0.0
    used: list[bool] = field(default_factory=list)
    slope: float | None = None
    fit_residual: float | None = None

    @property
    def excluded(self) -> list[int]:
        return [i for i, u in enumerate(self.used) if not u]


def method_display(method: str) -> str:
    """Output label; the Taylor oracle is flagged as jet-based."""
    return "exact (jet)" if method == "exact-taylor" else method


#: Calibrated (problem family, order) -> step-count ladder.  Each window was
#: chosen by scanning local convergence orders so the rungs sit where the
#: method is stable, asymptotic, and above the rounding floor.
_LADDERS = {
    ("sin", 2): [20, 40, 80, 160, 320, 640],
    ("sin", 3): [20, 40, 80, 160, 320],
    ("sin", 4): [40, 80, 160, 320],
    ("sin", 6): [2, 4, 8, 16],
    ("riccati", 2): [40, 80, 160, 320, 640, 1280],
    ("riccati", 3): [40, 80, 160, 320, 640],
    ("riccati", 4): [160, 320, 640, 1280],
    ("riccati", 6): [80, 160, 320, 640],
    ("log", 2): [160, 320, 640, 1280],
    ("log", 3): [80, 160, 320, 640],
    ("log", 4): [160, 320, 640, 1280],
    ("log", 6): [80, 160, 320, 640],
    ("pendulum", 2): [640, 1280, 2560, 5120],
    ("pendulum", 3): [640, 1280, 2560, 5120],
    ("pendulum", 4): [640, 1280, 2560, 5120],
    ("pendulum", 6): [320, 640, 1280, 2560],
    ("pendulum", 8): [48, 96, 192, 384],
    ("toggle", 2): [320, 640, 1280, 2560],
    ("toggle", 3): [320, 640, 1280, 2560],
    ("toggle", 4): [640, 1280, 2560, 5120],
    ("toggle", 6): [40, 80, 160, 320, 640],
    ("toggle", 8): [64, 128, 256, 512],
    ("rational", 2): [160, 320, 640, 1280],
    ("rational", 3): [160, 320, 640, 1280],
    ("rational", 4): [320, 640, 1280, 2560],
    ("rational", 6): [56, 112, 224, 448],
}


def default_ladder(problem: str, order: int) -> list[int]:
    """Calibrated step-count ladder for a catalog problem and order.

    These are configuration defaults (ratio-2 windows tuned per problem
    stiffness and order), not assertions; pass an explicit ladder to
    override.  Unknown combinations fall back to 20 * 2^j.
    """
    family = problem.split("-")[0]
    ladder = _LADDERS.get((family, order))
    if ladder is None:
        ladder = [20 * 2 ** j for j in range(6 if order <= 4 else 5)]
    return list(ladder)


def _run_once(spec: ProblemSpec, method: str, order: int, n_steps: int):
    """Integrate one rung; returns (endpoint or None, evals, diverged)."""
    sys = spec.system
    if method == "approx-taylor":
        try:
            traj, counter = integrate(sys, IntegratorConfig(order, n_steps))
        except DivergenceError:
            return None, 0, True
        return traj[-1][1], counter.total, False
    h = (sys.t_end - sys.t0) / n_steps
    counter = EvalCounter()
    v = sys.initial_state
    if method == "rk-tableau":
        if order == 2:
            tab = oracle.ORDER2_3STAGE
        elif order == 3:
            tab = oracle.ORDER3_5STAGE
        else:
            raise ValueError("rk-tableau supports orders 2 and 3 only")
    for n in range(n_steps):
        counter.begin_step()
        try:
            if method == "exact-taylor":
                v = oracle.exact_taylor_step(sys, v, h, order, counter)
            elif method == "rk4":
                v = oracle.rk_step(oracle.CLASSICAL_RK4, sys, v, h, counter)
            else:
                v = oracle.rk_step(tab, sys, v, h, counter)
        except DivergenceError:
            return None, counter.total, True
        counter.end_step()
    return v, counter.total, False


def reference_endpoint(spec: ProblemSpec, method: str, order: int, finest_n: int) -> np.ndarray:
    """Error baseline at t_end: closed form if available, else the same
    method on a 10x refined grid."""
    if spec.has_closed_form:
        return np.atleast_1d(spec.system.exact(spec.system.t_end))
    endpoint, _, diverged = _run_once(spec, method, order, 10 * finest_n)
    if diverged:
        raise DivergenceError(f"reference run diverged for '{spec.label}'")
    return endpoint


def fit_slope(hs, errors, floor: float):
    """OLS slope of log(error) vs log(h) over rows above the floor.

    Returns (slope, rms residual, used mask); slope is None with fewer than
    two usable rows.
    """
    used = [bool(np.isfinite(e)) and e > floor for e in errors]
    xs = [math.log(h) for h, u in zip(hs, used) if u]
    ys = [math.log(e) for e, u in zip(errors, used) if u]
    if len(xs) < 2:
        return None, None, used
    coeffs = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((np.polyval(coeffs, xs) - np.asarray(ys)) ** 2)))
    return float(coeffs[0]), resid, used


def run_study(spec: StudySpec, problem: ProblemSpec | None = None) -> ConvergenceReport:
    """Run every rung of the study; divergent rungs are recorded, not fatal."""
    prob = problem if problem is not None else make_problem(spec.problem, seed=spec.seed)
    sys = prob.system
    ref = reference_endpoint(prob, spec.method, spec.order, spec.ladder[-1])
    floor = FLOOR_COEFF * max(1.0, float(np.max(np.abs(ref))))
    report = ConvergenceReport(spec.problem, method_display(spec.method), spec.order,
                               spec.seed, floor=floor)
    for n in spec.ladder:
        h = (sys.t_end - sys.t0) / n
        times = []
        first = None
        for _ in range(spec.repeats):
            t_start = time.perf_counter_ns()
            out = _run_once(prob, spec.method, spec.order, n)
            times.append(time.perf_counter_ns() - t_start)
            if first is None:
                first = out
        endpoint, evals, diverged = first
        err = math.nan if diverged else float(np.max(np.abs(endpoint - ref)))
        report.rows.append(RungRow(h, n, err, evals, int(np.median(times)), diverged))
    report.slope, report.fit_residual, report.used = fit_slope(
        [r.h for r in report.rows], [r.error for r in report.rows], floor)
    return report


@dataclass
class ComparisonResult:
    """Two studies on the same problem/ladder, plus non-gated efficiency facts."""

    reports: tuple[ConvergenceReport, ConvergenceReport]
    evals_per_step: tuple[float, float]
    time_ratio_at_finest: float  # time(second) / time(first)


def compare_methods(problem: str, order: int, ladder: list[int],
                    methods: tuple[str, str] = ("approx-taylor", "rk4"),
                    seed: int = 0, repeats: int = 1) -> ComparisonResult:
    """Side-by-side study of two methods with identical ladders.

    Accuracy slopes are for the caller to assert; relative speed is
    reported (time columns and the finest-rung ratio), never gated.
    """
    reports = tuple(
        run_study(StudySpec(problem, meth, order, list(ladder), seed=seed, repeats=repeats))
        for meth in methods)
    eps = tuple(rep.rows[-1].evals / rep.rows[-1].n_steps for rep in reports)
    ratio = reports[1].rows[-1].time_ns / max(1, reports[0].rows[-1].time_ns)
    return ComparisonResult(reports, eps, ratio)


def emit_csv(report: ConvergenceReport, path: str) -> None:
    """Write a report: '#'-prefixed metadata, then h,error,evals,time_ns rows.

    Floats carry 17 significant digits so repeated runs of the same study
    are byte-identical except for the time_ns column.
    """
    lines = [
        f"# problem={report.problem}",
        f"# method={report.method}",
        f"# R={report.order}",
        f"# seed={report.seed}",
        f"# slope={'nan' if report.slope is None else format(report.slope, '.17g')}",
        "h,error,evals,time_ns",
    ]
    for row in report.rows:
        lines.append(f"{row.h:.17g},{row.error:.17g},{row.evals},{row.time_ns}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
