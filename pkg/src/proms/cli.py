"""Command-line front end: solve, bench, gen, and theory subcommands."""

from __future__ import annotations

import argparse
import sys

from .baselines import BaselineParams
from .bench import (
    BenchConfig,
    default_workers,
    flips_per_second_probe,
    render_jsonl,
    render_table,
    run_bench,
)
from .cnf import DimacsError, parse_dimacs_file, to_dimacs
from .gen import generate
from .solver import MAX_STEPS_DEFAULT, default_params, solve
from .state import ClauseSel, Scheme
from .theory import constant_violation_threshold, exponent_per_clause, h_of_r


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", choices=("proms", "probsat", "walksat"),
                   default="proms")
    p.add_argument("--scheme", choices=[s.value for s in Scheme],
                   default=Scheme.MCBN.value,
                   help="make/break computation scheme (default: mcbn)")
    p.add_argument("--clause-sel", choices=[c.value for c in ClauseSel],
                   default=ClauseSel.SBFS.value,
                   help="unsatisfied-clause selection strategy (default: sbfs)")
    p.add_argument("--zeta", type=float, default=None,
                   help="make exponent (default: r + 17.5)")
    p.add_argument("--eta", type=float, default=None,
                   help="break exponent (default: -2.5)")
    p.add_argument("--delta", type=float, default=None,
                   help="clause-score threshold (default: max(0, 0.4r - 1.4))")
    p.add_argument("--mmax-factor", type=float, default=None,
                   help="defragmentation threshold as a multiple of m (default: 4.5)")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--cutoff", type=float, default=300.0,
                   help="wall-clock budget per run in seconds (default: 300)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proms",
        description="Anytime Max-SAT local search solver and benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one solver on one instance")
    p_solve.add_argument("instance")
    _add_solver_flags(p_solve)
    p_solve.add_argument("--model", action="store_true",
                         help="also print the best assignment as v-lines")

    p_bench = sub.add_parser("bench", help="run a benchmark over instances")
    p_bench.add_argument("paths", nargs="+",
                         help="instance files or directories of *.cnf files")
    _add_solver_flags(p_bench)
    p_bench.add_argument("--runs", type=int, default=1)
    p_bench.add_argument("--workers", type=int, default=default_workers())
    p_bench.add_argument("--format", choices=("table", "jsonl"), default="table")
    p_bench.add_argument("--optima", default=None,
                         help="file of `instance-name optimum` lines; runs stop "
                              "on reaching the optimum and success is measured "
                              "against it")

    p_probe = sub.add_parser("probe", help="measure flips per second")
    p_probe.add_argument("instance")
    p_probe.add_argument("--scheme", choices=[s.value for s in Scheme],
                         default=Scheme.MCBN.value)
    p_probe.add_argument("--seconds", type=float, default=1.0)
    p_probe.add_argument("--seed", type=int, default=0)

    p_gen = sub.add_parser("gen", help="generate a uniform random k-SAT instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--k", type=int, default=3)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", default=None,
                       help="write DIMACS here instead of stdout")

    p_theory = sub.add_parser(
        "theory", help="satisfiable-fraction analysis for random 3-SAT ratios")
    p_theory.add_argument("--ratios", default="7.5,10,12.5,15,17.5,20,21.5",
                          help="comma-separated clause/variable ratios")
    return parser


def _cmd_solve(args) -> int:
    try:
        f = parse_dimacs_file(args.instance)
    except (OSError, DimacsError) as e:
        print(f"error: {args.instance}: {e}", file=sys.stderr)
        return 1
    params = default_params(
        f, seed=args.seed, scheme=Scheme(args.scheme),
        clause_sel=ClauseSel(args.clause_sel),
        max_steps=args.max_steps if args.max_steps else MAX_STEPS_DEFAULT,
        cutoff_seconds=args.cutoff,
    )
    for name, value in (("zeta", args.zeta), ("eta", args.eta),
                        ("delta", args.delta), ("m_max_factor", args.mmax_factor)):
        if value is not None:
            setattr(params, name, value)
    res = solve(f, params, picker=args.solver, baseline_params=BaselineParams())
    print(f"c instance {args.instance} n={f.n} m={f.m} r={f.r:.3f}")
    print(f"c solver {args.solver} seed {args.seed}")
    print(f"o {res.best_unsat}")
    print(f"c steps {res.steps_executed} wall {res.wall_time:.3f}s "
          f"time-to-best {res.time_to_best:.3f}s "
          f"flips/s {res.flips_per_second:.0f}")
    if args.model:
        lits = [str(v + 1) if res.best_assignment[v] else str(-(v + 1))
                for v in range(f.n)]
        print("v " + " ".join(lits) + " 0")
    return 0


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        paths=args.paths,
        solvers=(args.solver,),
        runs=args.runs,
        cutoff_seconds=args.cutoff,
        max_steps=args.max_steps if args.max_steps else MAX_STEPS_DEFAULT,
        seed_base=args.seed,
        workers=args.workers,
        fmt=args.format,
        optima_file=args.optima,
        zeta=args.zeta,
        eta=args.eta,
        delta=args.delta,
        m_max_factor=args.mmax_factor,
        scheme=Scheme(args.scheme),
        clause_sel=ClauseSel(args.clause_sel),
    )
    try:
        cfg.validate()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    report = run_bench(cfg)
    if cfg.fmt == "jsonl":
        sys.stdout.write(render_jsonl(report.records))
    else:
        sys.stdout.write(render_table(report.summaries))
    for path, msg in report.failures:
        print(f"error: {path}: {msg}", file=sys.stderr)
    return 1 if report.failures else 0


def _cmd_probe(args) -> int:
    try:
        f = parse_dimacs_file(args.instance)
    except (OSError, DimacsError) as e:
        print(f"error: {args.instance}: {e}", file=sys.stderr)
        return 1
    rate = flips_per_second_probe(f, Scheme(args.scheme), args.seconds,
                                  seed=args.seed)
    print(f"{rate:.0f}")
    return 0


def _cmd_gen(args) -> int:
    try:
        f = generate(args.n, args.m, args.k, args.seed)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    text = to_dimacs(f)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_theory(args) -> int:
    try:
        ratios = [float(tok) for tok in args.ratios.split(",") if tok.strip()]
    except ValueError:
        print(f"error: bad ratio list {args.ratios!r}", file=sys.stderr)
        return 2
    print(f"constant-violation threshold ratio: "
          f"{constant_violation_threshold():.4f}")
    print(f"{'r':>10} {'h(r)':>10} {'unsat fraction':>15}")
    for r in ratios:
        try:
            lam = h_of_r(r)
            print(f"{r:>10.2f} {lam:>10.5f} {1.0 - lam:>15.5f}")
        except ValueError:
            print(f"{r:>10.2f} {'-':>10} {'-':>15}")
    lam_hi = 0.972
    print(f"\nper-clause exponent at r=21.5, fraction {lam_hi}: "
          f"{exponent_per_clause(21.5, lam_hi):.5f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "probe": _cmd_probe,
        "gen": _cmd_gen,
        "theory": _cmd_theory,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
