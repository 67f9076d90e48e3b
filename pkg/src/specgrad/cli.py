"""Command-line benchmark driver (installed as ``bench``).

Subcommands:

* ``bench run``      run solvers x problems x dims, emit results.csv/.json
* ``bench profile``  compute performance profiles from an emitted run
* ``bench trace``    print the per-iteration mu table for one run

Exit code is 0 iff no evaluation error occurred.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (
    METRICS,
    SolverSpec,
    emit,
    had_eval_error,
    load_results,
    performance_profile,
    performance_ratios,
    run_suite,
)
from .problems import family_names, problem
from .solver import EVAL_ERROR, minimize


def _parse_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_solver_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=1e-8, help="gradient tolerance (inf-norm)")
    p.add_argument("--max-iter", type=int, default=10000, help="iteration budget")
    p.add_argument("--eta", type=float, default=1e-3, help="sufficient-descent margin")
    p.add_argument("--tau", type=float, default=10.0, help="spectral upper bound")


def _cmd_run(args) -> int:
    solvers = [SolverSpec.parse(s) for s in _parse_list(args.solvers)]
    names = family_names() if args.problems.strip() == "all" else _parse_list(args.problems)
    dims = [int(d) for d in _parse_list(args.dims)]
    table = run_suite(
        solvers,
        names,
        dims,
        epsilon=args.eps,
        max_iter=args.max_iter,
        eta=args.eta,
        tau=args.tau,
    )
    emit(table, None, "csv", args.out)
    emit(table, None, "json", args.out)
    for row in table.rows:
        r = row.result
        print(
            f"{row.solver:<18} {row.problem:<16} n={row.dim:<6} {r.status:<19} "
            f"ni={r.ni:<6} nf={r.nf:<6} ng={r.ng:<6} f={r.f_final:.6e} gnorm={r.gnorm_inf_final:.3e}"
        )
    print(f"wrote results for {len(table.rows)} runs to {args.out}")
    return 1 if had_eval_error(table) else 0


def _cmd_profile(args) -> int:
    table = load_results(args.in_dir)
    metrics = list(METRICS) if args.metric == "all" else [args.metric]
    curves = []
    excluded_lines = []
    for metric in metrics:
        ratio_set = performance_ratios(table, metric)
        curves.extend(performance_profile(ratio_set))
        if ratio_set.excluded:
            print(f"[{metric}] excluded (no solver succeeded): {', '.join(ratio_set.excluded)}")
            excluded_lines.extend(f"{metric.upper()},{p}" for p in ratio_set.excluded)
        for c in performance_profile(ratio_set, grid=[1.0]):
            print(f"[{metric}] rho(1) {c.solver} = {c.points[0][1]:.3f}")
    emit(table, curves, "csv", args.out)
    emit(table, curves, "json", args.out)
    if excluded_lines:
        path = Path(args.out) / "excluded.csv"
        path.write_text("metric,problem\n" + "\n".join(excluded_lines) + "\n")
        print(f"wrote exclusion report to {path}")
    print(f"wrote profiles for metrics {', '.join(m.upper() for m in metrics)} to {args.out}")
    return 1 if had_eval_error(table) else 0


def _cmd_trace(args) -> int:
    spec = SolverSpec.parse(args.solver)
    cfg = spec.config(
        epsilon=args.eps,
        max_iter=args.max_iter,
        eta=args.eta,
        tau=args.tau,
        trace_level="full",
    )
    result = minimize(problem(args.problem, args.dim), cfg)
    records = (result.trace or [])[: args.iters]
    print(f"{'iteration':>10} {'mu':>14} {'t':>14} {'alpha':>12} {'f':>14}")
    for rec in records:
        print(f"{rec.k + 1:>10} {rec.mu:>14.3E} {rec.t:>14.3E} {rec.alpha:>12.3E} {rec.f:>14.6E}")
    print(
        f"status={result.status} ni={result.ni} nf={result.nf} ng={result.ng} "
        f"gnorm={result.gnorm_inf_final:.3e}"
    )
    return 1 if result.status == EVAL_ERROR else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Spectral CG benchmark harness: run suites, build performance profiles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a suite of solvers over test problems")
    p_run.add_argument(
        "--solvers",
        default="scgmmwls:m=3,dk,jian,m2:m=3",
        help="comma list, e.g. scgmmwls:m=3,dk,jian,m2:m=3 (m may be 'inf')",
    )
    p_run.add_argument("--problems", default="all", help="'all' or a comma list of names")
    p_run.add_argument("--dims", default="100", help="comma list of dimensions")
    _add_solver_options(p_run)
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_prof = sub.add_parser("profile", help="compute Dolan-More profiles from a finished run")
    p_prof.add_argument("--metric", choices=[*METRICS, "all"], default="all")
    p_prof.add_argument("--in", dest="in_dir", required=True, help="directory written by 'run'")
    p_prof.add_argument("--out", required=True, help="output directory")
    p_prof.set_defaults(func=_cmd_profile)

    p_trace = sub.add_parser("trace", help="print the mu trace of a single run")
    p_trace.add_argument("--problem", required=True)
    p_trace.add_argument("--dim", type=int, default=1000)
    p_trace.add_argument("--solver", default="scgmmwls:m=3")
    p_trace.add_argument("--iters", type=int, default=24, help="rows to print")
    _add_solver_options(p_trace)
    p_trace.set_defaults(func=_cmd_trace)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
