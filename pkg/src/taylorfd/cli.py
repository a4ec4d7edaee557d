"""Command-line front end.

Subcommands: integrate (one run, prints the endpoint), converge (study ->
CSV), compare (two-method study), cost (operation-count table), stencil
(print exact difference weights), list-problems.

Exit codes: 0 success, 1 usage error, 2 divergence.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import costmodel, harness, problems
from .core import DivergenceError, IntegratorConfig, integrate
from .stencil import build_stencil


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; this tool reserves 2 for divergence.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _int_range(text: str) -> list[int]:
    """'2:6' -> [2..6]; '2,4,6' -> [2, 4, 6]."""
    if ":" in text:
        lo, _, hi = text.partition(":")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected lo:hi, got '{text}'")
    return _int_list(text)


def _add_problem_args(p: _Parser) -> None:
    p.add_argument("--problem", required=True,
                   help="catalog label (see list-problems); rational-<m> sets the dimension")
    p.add_argument("--seed", type=int, default=0, help="seed for rational coefficients")
    p.add_argument("--coeffs", help="CSV file of rational coefficients to load")
    p.add_argument("--coeffs-out", help="write the rational coefficients used to this CSV")


def _build_problem(args) -> problems.ProblemSpec:
    coeffs = problems.load_rational_coefficients(args.coeffs) if args.coeffs else None
    spec = problems.make_problem(args.problem, seed=args.seed, coefficients=coeffs)
    if args.coeffs_out:
        if not args.problem.startswith("rational"):
            raise ValueError("--coeffs-out only applies to rational systems")
        problems.save_rational_coefficients(args.coeffs_out,
                                            spec.params["alpha"], spec.params["beta"])
    return spec


def _cmd_integrate(args) -> int:
    prob = _build_problem(args)
    if args.method == "approx-taylor":
        traj, counter = integrate(prob.system, IntegratorConfig(args.order, args.steps))
        endpoint, evals = traj[-1][1], counter.total
    else:
        endpoint, evals, diverged = harness._run_once(prob, args.method, args.order, args.steps)
        if diverged:
            raise DivergenceError(f"divergence while integrating '{prob.label}'")
    np.set_printoptions(precision=17)
    print(f"problem={prob.label} method={harness.method_display(args.method)} "
          f"R={args.order} n={args.steps}")
    print(f"endpoint t={prob.system.t_end:g}: {endpoint}")
    print(f"rhs evaluations: {evals}")
    if prob.has_closed_form:
        err = np.max(np.abs(endpoint - prob.system.exact(prob.system.t_end)))
        print(f"endpoint error vs closed form: {err:.6e}")
    return 0


def _cmd_converge(args) -> int:
    prob = _build_problem(args)
    ladder = args.ladder or harness.default_ladder(args.problem, args.order)
    spec = harness.StudySpec(args.problem, args.method, args.order, ladder,
                             seed=args.seed, repeats=args.repeats)
    report = harness.run_study(spec, problem=prob)
    _print_report(report)
    if args.out:
        harness.emit_csv(report, args.out)
        print(f"wrote {args.out}")
    return 0


def _print_report(report: harness.ConvergenceReport) -> None:
    print(f"problem={report.problem} method={report.method} R={report.order}")
    print(f"{'h':>12} {'error':>13} {'evals':>9} {'time_ns':>12}  used")
    for row, used in zip(report.rows, report.used):
        mark = "diverged" if row.diverged else ("yes" if used else "floor")
        print(f"{row.h:12.6g} {row.error:13.6e} {row.evals:9d} {row.time_ns:12d}  {mark}")
    slope = "n/a" if report.slope is None else f"{report.slope:.3f}"
    print(f"fitted order: {slope}")


def _cmd_compare(args) -> int:
    methods = tuple(args.methods.split(","))
    if len(methods) != 2:
        raise ValueError("--methods needs exactly two comma-separated names")
    ladder = args.ladder or harness.default_ladder(args.problem, args.order)
    result = harness.compare_methods(args.problem, args.order, ladder,
                                     methods=methods, seed=args.seed, repeats=args.repeats)
    for rep in result.reports:
        _print_report(rep)
    a, b = result.evals_per_step
    print(f"evals per step: {methods[0]}={a:.0f} {methods[1]}={b:.0f}")
    print(f"time ratio at finest rung ({methods[1]}/{methods[0]}): {result.time_ratio_at_finest:.3f}")
    if args.out:
        for rep, meth in zip(result.reports, methods):
            path = f"{args.out}-{meth}.csv"
            harness.emit_csv(rep, path)
            print(f"wrote {path}")
    return 0


def _cmd_cost(args) -> int:
    lines = ["m,R,taylor_lower,approx,ratio"]
    for m in args.dims:
        for order in args.orders:
            r = costmodel.rational_cost_ratio(m, order)
            c = costmodel.rational_cost_vector(m, order)
            lower = costmodel.taylor_cost_lower(m, order, c) if m > 1 else costmodel.taylor_cost(m, order, c)
            approx = costmodel.approx_cost(m, order, c[0])
            lines.append(f"{m},{order},{lower},{approx},{float(r.q):.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_stencil(args) -> int:
    st = build_stencil(args.p, args.q)
    print(f"derivative order {st.deriv_order}, accuracy order {2 * st.half_order}, "
          f"{st.width} nodes")
    for off, w in zip(st.offsets, st.weights):
        print(f"{off:+d}: {w}")
    return 0


def _cmd_list_problems(args) -> int:
    for label in problems.CATALOG_LABELS:
        spec = problems.make_problem(label)
        kind = "closed form" if spec.has_closed_form else "refined reference"
        print(f"{label:12s} m={spec.system.m}  t in [{spec.system.t0:g}, {spec.system.t_end:g}]  ({kind})")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="taylorfd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="run one integration and print the endpoint")
    _add_problem_args(p)
    p.add_argument("--method", default="approx-taylor", choices=harness.METHODS)
    p.add_argument("--order", type=int, default=4, metavar="R")
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=_cmd_integrate)

    p = sub.add_parser("converge", help="convergence study to CSV")
    _add_problem_args(p)
    p.add_argument("--method", default="approx-taylor", choices=harness.METHODS)
    p.add_argument("--order", type=int, default=4, metavar="R")
    p.add_argument("--ladder", type=_int_list, help="comma-separated step counts")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--repeats", type=int, default=5, help="timing repetitions per rung")
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("compare", help="two-method study on one problem")
    _add_problem_args(p)
    p.add_argument("--order", type=int, default=4, metavar="R")
    p.add_argument("--methods", default="approx-taylor,rk4")
    p.add_argument("--ladder", type=_int_list)
    p.add_argument("--out", help="CSV output prefix")
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("cost", help="operation-count table for the rational system")
    p.add_argument("--dims", type=_int_range, default=list(range(4, 8)), metavar="LO:HI")
    p.add_argument("--orders", type=_int_range, default=[2, 4, 6], metavar="LO:HI")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("stencil", help="print exact finite-difference weights")
    p.add_argument("p", type=int, help="derivative order")
    p.add_argument("q", type=int, help="half accuracy order (error O(h^2q))")
    p.set_defaults(func=_cmd_stencil)

    p = sub.add_parser("list-problems", help="show the problem catalog")
    p.set_defaults(func=_cmd_list_problems)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as e:
        print(f"divergence: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
