"""Benchmark harness: run solvers over instance files with seeds and
cutoffs, aggregate per-class opt/avg/time statistics, render tables or
JSON-lines records.

Session semantics: the reference ("best") value for an instance is its
minimum over every run of every solver in the invocation, unless a known
optimum is supplied; a run is successful iff it reaches the reference.
"opt." averages each solver's per-instance best over the class, "avg."
averages all runs, "time" averages time-to-best over successful runs only
(rendered as "-" when there are none).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import BaselineParams
from .cnf import DimacsError, Formula, parse_dimacs_file
from .solver import MAX_STEPS_DEFAULT, default_params, solve
from .state import ClauseSel, Scheme

SOLVER_NAMES = ("proms", "probsat", "walksat")


@dataclass
class BenchConfig:
    paths: list
    solvers: tuple = ("proms",)
    runs: int = 1
    cutoff_seconds: float | None = 300.0
    max_steps: int = MAX_STEPS_DEFAULT
    seed_base: int = 0
    workers: int = 1
    fmt: str = "table"                  # "table" | "jsonl"
    optima_file: str | None = None
    zeta: float | None = None           # None: ratio-derived default
    eta: float | None = None
    delta: float | None = None
    m_max_factor: float | None = None
    scheme: Scheme = Scheme.MCBN
    clause_sel: ClauseSel = ClauseSel.SBFS
    baseline: BaselineParams = field(default_factory=BaselineParams)

    def validate(self) -> None:
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.paths:
            raise ValueError("no instance paths given")
        if self.fmt not in ("table", "jsonl"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        for s in self.solvers:
            if s not in SOLVER_NAMES:
                raise ValueError(f"unknown solver {s!r}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        self.baseline.validate()


@dataclass
class ClassSummary:
    name: str
    solver: str
    num_instances: int
    opt_avg: float
    avg_avg: float
    time_avg: float | None       # None: no successful run
    successes: int
    total_runs: int


@dataclass
class BenchReport:
    summaries: list
    records: list
    failures: list               # (path, message) for unreadable instances


def expand_paths(paths) -> list[Path]:
    """Files stay files; directories contribute their *.cnf files, sorted."""
    out: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            out.extend(sorted(p.glob("*.cnf")))
        else:
            out.append(p)
    return out


def load_optima(path) -> dict[str, int]:
    """Known optima: lines of `instance-name value`, `#` comments allowed."""
    optima: dict[str, int] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, value = line.rsplit(None, 1)
            optima[name] = int(value)
    return optima


def class_key(n: int, m: int) -> str:
    return f"v{n}c{m}"


_formula_cache: dict[str, Formula] = {}


def _parse_cached(path: str) -> Formula:
    f = _formula_cache.get(path)
    if f is None:
        f = parse_dimacs_file(path)
        _formula_cache[path] = f
    return f


def _run_task(task) -> dict:
    (path, solver, seed, stop_at, overrides, scheme, clause_sel,
     max_steps, cutoff, baseline) = task
    f = _parse_cached(path)
    params = default_params(
        f, seed=seed, scheme=Scheme(scheme), clause_sel=ClauseSel(clause_sel),
        max_steps=max_steps, cutoff_seconds=cutoff,
    )
    for name, value in overrides.items():
        if value is not None:
            setattr(params, name, value)
    res = solve(f, params, picker=solver,
                baseline_params=BaselineParams(*baseline), stop_at=stop_at)
    return {
        "instance": path,
        "solver": solver,
        "seed": seed,
        "best": int(res.best_unsat),
        "steps": int(res.steps_executed),
        "time_to_best": float(res.time_to_best),
        "wall_time": float(res.wall_time),
        "n": f.n,
        "m": f.m,
    }


def run_bench(cfg: BenchConfig) -> BenchReport:
    """Execute the configured runs and aggregate them.

    Parallelism is across runs only (each run owns its state and seed), so
    results are independent of the worker count. Unparseable instances are
    reported in ``failures`` and skipped.
    """
    cfg.validate()
    optima = load_optima(cfg.optima_file) if cfg.optima_file else {}

    instances: list[str] = []
    failures: list = []
    for p in expand_paths(cfg.paths):
        try:
            _parse_cached(str(p))
        except (OSError, DimacsError) as e:
            failures.append((str(p), str(e)))
            continue
        instances.append(str(p))

    overrides = {
        "zeta": cfg.zeta, "eta": cfg.eta, "delta": cfg.delta,
        "m_max_factor": cfg.m_max_factor,
    }
    baseline = (cfg.baseline.cb, cfg.baseline.k, cfg.baseline.noise)
    tasks = []
    for path in instances:
        target = optima.get(Path(path).name)
        stop_at = target if target is not None else 0
        for solver in cfg.solvers:
            for i in range(cfg.runs):
                tasks.append((path, solver, cfg.seed_base + i, stop_at,
                              overrides, cfg.scheme.value, cfg.clause_sel.value,
                              cfg.max_steps, cfg.cutoff_seconds, baseline))

    if cfg.workers == 1 or len(tasks) <= 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=1))

    summaries = aggregate(records, optima)
    return BenchReport(summaries=summaries, records=records, failures=failures)


def aggregate(records, optima=None) -> list[ClassSummary]:
    """Fold per-run records into per-(class, solver) summaries."""
    optima = optima or {}
    reference: dict[str, int] = {}
    for rec in records:
        inst = rec["instance"]
        known = optima.get(Path(inst).name)
        cand = known if known is not None else rec["best"]
        if inst not in reference or cand < reference[inst]:
            reference[inst] = cand

    groups: dict[tuple, dict[str, list]] = {}
    for rec in records:
        key = (rec["n"], rec["m"], rec["solver"])
        groups.setdefault(key, {}).setdefault(rec["instance"], []).append(rec)

    summaries = []
    for (n, m, solver), per_inst in sorted(groups.items()):
        name = class_key(n, m)
        opts, avgs, times = [], [], []
        successes = total = 0
        for inst, recs in per_inst.items():
            bests = [r["best"] for r in recs]
            opts.append(min(bests))
            avgs.append(sum(bests) / len(bests))
            total += len(recs)
            for r in recs:
                if r["best"] <= reference[inst]:
                    successes += 1
                    times.append(r["time_to_best"])
        summaries.append(ClassSummary(
            name=name,
            solver=solver,
            num_instances=len(per_inst),
            opt_avg=sum(opts) / len(opts),
            avg_avg=sum(avgs) / len(avgs),
            time_avg=sum(times) / len(times) if times else None,
            successes=successes,
            total_runs=total,
        ))
    return summaries


def render_table(summaries) -> str:
    lines = [
        f"{'class':<14} {'solver':<8} {'inst':>4} {'opt.':>9} {'avg.':>9} "
        f"{'time':>8} {'succ':>11}"
    ]
    for s in summaries:
        time_str = "-" if s.time_avg is None else f"{s.time_avg:.1f}"
        succ = f"{s.successes}/{s.total_runs}"
        lines.append(
            f"{s.name:<14} {s.solver:<8} {s.num_instances:>4} {s.opt_avg:>9.2f} "
            f"{s.avg_avg:>9.2f} {time_str:>8} {succ:>11}"
        )
    return "\n".join(lines) + "\n"


def render_jsonl(records) -> str:
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)


def flips_per_second_probe(f: Formula, scheme: Scheme = Scheme.MCBN,
                           seconds: float = 1.0, *, max_steps: int | None = None,
                           clause_sel: ClauseSel = ClauseSel.SBFS,
                           seed: int = 0) -> float:
    """Throughput of the solve loop on ``f``: flips per second over a
    wall-clock probe (or a fixed step budget, which is run-deterministic)."""
    params = default_params(
        f, seed=seed, scheme=Scheme(scheme), clause_sel=ClauseSel(clause_sel),
        max_steps=max_steps if max_steps else MAX_STEPS_DEFAULT,
        cutoff_seconds=None if max_steps else seconds,
    )
    res = solve(f, params, stop_at=-1)
    return res.flips_per_second


def default_workers() -> int:
    return os.cpu_count() or 1
