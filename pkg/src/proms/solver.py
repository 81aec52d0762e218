"""The main anytime Max-SAT search loop and its variable-selection rule.

Each step picks an unsatisfied clause, scores the clause's variables as
``f(v) = make(v)^zeta * (break_base + break(v))^eta``, and flips one of
them: sampled with probability ``f(v) / tau`` when the clause score
``tau = sum f(v)`` exceeds the threshold ``delta``, uniformly at random
otherwise. The incumbent (best assignment seen) is updated whenever the
number of unsatisfied clauses reaches a new low, and is what a run returns.

Runs are deterministic given (formula, params): one SplitMix64 stream
drives the initial assignment and every subsequent draw, consuming exactly
one draw per variable pick, so equal seeds give bit-identical flip
sequences across all four caching schemes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from time import perf_counter

import numpy as np

from . import _kernels as _k
from .baselines import BaselineParams
from .cnf import Formula, random_assignment
from .rng import SplitMix64
from .state import (
    ClauseSel,
    Scheme,
    SearchState,
    kernel_pick,
    kernel_pick_histogram,
    score_tables,
)

MAX_STEPS_DEFAULT = 2**63 - 1

_PICKER_IDS = {
    "proms": _k.PICKER_PROMS,
    "probsat": _k.PICKER_PROBSAT,
    "walksat": _k.PICKER_WALKSAT,
}


def _picker_id(name: str) -> int:
    try:
        return _PICKER_IDS[name]
    except KeyError:
        raise ValueError(
            f"unknown picker {name!r}; choose one of {sorted(_PICKER_IDS)}"
        ) from None


@dataclass
class SolverParams:
    zeta: float                      # make-value exponent
    eta: float                       # break-value exponent
    delta: float                     # clause-score threshold for pure-random mode
    max_steps: int = MAX_STEPS_DEFAULT
    m_max_factor: float = 4.5        # defragmentation threshold, in clause counts
    scheme: Scheme = Scheme.MCBN
    clause_sel: ClauseSel = ClauseSel.SBFS
    seed: int = 0
    cutoff_seconds: float | None = None
    break_base: float = 1.0          # offset in the break factor (base + b)^eta

    def validate(self) -> None:
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.m_max_factor < 1:
            raise ValueError("m_max_factor must be >= 1")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.break_base <= 0:
            raise ValueError("break_base must be positive")
        if self.cutoff_seconds is not None and self.cutoff_seconds <= 0:
            raise ValueError("cutoff_seconds must be positive")


@dataclass
class RunResult:
    best_unsat: int
    best_assignment: np.ndarray
    steps_executed: int
    wall_time: float
    time_to_best: float
    flips_per_second: float
    defrags: int = 0
    flips: np.ndarray | None = None   # per-step flipped variable, if recorded


def default_params(f: Formula, seed: int = 0, **overrides) -> SolverParams:
    """Ratio-derived defaults: zeta = r + 17.5, eta = -2.5,
    delta = max(0, 0.4 r - 1.4)."""
    r = f.r
    params = SolverParams(
        zeta=r + 17.5,
        eta=-2.5,
        delta=max(0.0, 0.4 * r - 1.4),
        seed=seed,
    )
    if overrides:
        params = replace(params, **overrides)
    return params


def score(v: int, state: SearchState, params: SolverParams) -> float:
    """f(v) = make(v)^zeta * (break_base + break(v))^eta.

    Overflows saturate to inf (C pow semantics, matching the compiled
    picker) instead of raising.
    """
    mk = state.make_value(v)
    b = state.break_value(v)
    try:
        return float(mk) ** params.zeta * (params.break_base + b) ** params.eta
    except OverflowError:
        return float("inf")


def clause_score(c: int, state: SearchState, params: SolverParams) -> float:
    """tau(c): sum of variable scores over the clause."""
    return sum(score(code >> 1, state, params) for code in state.formula.clauses[c])


def pick_variable(c: int, state: SearchState, params: SolverParams,
                  rng: SplitMix64) -> int:
    """One variable of unsatisfied clause ``c``: distribution-sampled when
    tau(c) > delta, uniform otherwise. Consumes exactly one draw."""
    return kernel_pick(
        state, c, rng, _k.PICKER_PROMS,
        zeta=params.zeta, eta=params.eta, bbase=params.break_base,
        delta=params.delta,
    )


def pick_histogram(c: int, state: SearchState, params, rng: SplitMix64,
                   count: int, picker: str = "proms") -> np.ndarray:
    """Variable-frequency histogram of ``count`` repeated picks on ``c``.

    ``params`` is a SolverParams for the distribution picker or a
    BaselineParams for the reference pickers.
    """
    pid = _picker_id(picker)
    if pid == _k.PICKER_PROMS:
        kw = dict(zeta=params.zeta, eta=params.eta, bbase=params.break_base,
                  delta=params.delta)
    else:
        kw = dict(cb=params.cb, kexp=params.k, noise=params.noise)
    return kernel_pick_histogram(state, c, rng, count, pid, **kw)


def solve(f: Formula, params: SolverParams, *, picker: str = "proms",
          baseline_params: BaselineParams | None = None, stop_at: int = 0,
          record_flips: bool = False) -> RunResult:
    """Run the search for up to ``params.max_steps`` flips (or
    ``params.cutoff_seconds``), returning the incumbent.

    The run stops early once the incumbent reaches ``stop_at`` unsatisfied
    clauses (0 by default: a fully satisfying assignment is a proven
    optimum). Pass a known optimum to stop there, or -1 to always exhaust
    the budget. ``record_flips`` stores the flipped variable per step in
    ``RunResult.flips``.
    """
    params.validate()
    pid = _picker_id(picker)
    bp = baseline_params if baseline_params is not None else BaselineParams()
    bp.validate()

    rng = SplitMix64(params.seed)
    a = random_assignment(f.n, rng)
    state = SearchState(f, a, params.scheme, params.clause_sel, params.m_max_factor)

    if record_flips:
        if params.max_steps > 50_000_000:
            raise ValueError("record_flips needs a bounded max_steps")
        trace = np.zeros(params.max_steps, dtype=np.int32)
    else:
        trace = np.zeros(0, dtype=np.int32)

    cls_lits, cls_off, occ_cls, occ_off = f.flat
    pow_make, pow_brk = score_tables(pid, params.zeta, params.eta,
                                     params.break_base, bp.cb, bp.k)
    rs = np.array([rng.state], dtype=np.uint64)
    chunk_size = 1 << 16
    steps = 0
    time_to_best = 0.0
    t0 = perf_counter()
    while steps < params.max_steps and state.best_unsat > stop_at:
        if (params.cutoff_seconds is not None
                and perf_counter() - t0 >= params.cutoff_seconds):
            break
        chunk = min(chunk_size, params.max_steps - steps)
        done, status = _k.run_chunk(
            chunk, stop_at, pid,
            params.zeta, params.eta, params.break_base, params.delta,
            bp.cb, bp.k, bp.noise, pow_make, pow_brk,
            state.values, state.true_count, state.crit_xor, state.make, state.brk,
            state.make_cached, state.break_cached,
            cls_lits, cls_off, occ_cls, occ_off,
            state.buffer.slots, state.buffer.pos, state.buffer.meta,
            state.best, state.best_values, state.scores, rs,
            trace, steps,
        )
        steps += done
        if status == _k.STATUS_IMPROVED:
            time_to_best = perf_counter() - t0
        elif status == _k.STATUS_TARGET:
            break
    wall = perf_counter() - t0
    return RunResult(
        best_unsat=state.best_unsat,
        best_assignment=state.best_assignment,
        steps_executed=steps,
        wall_time=wall,
        time_to_best=time_to_best,
        flips_per_second=steps / wall if wall > 0 else 0.0,
        defrags=state.defrags,
        flips=trace[:steps].copy() if record_flips else None,
    )
