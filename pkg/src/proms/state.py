"""Incremental search state: true-literal counters, make/break values under
four caching schemes, and the unsatisfied-clause buffers.

The scheme controls only how make/break values are obtained (cached
incrementally vs recomputed on demand from the occurrence lists); all four
expose identical values. True-literal counts and buffer membership are
always maintained, since clause selection needs them regardless.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from . import _kernels as _k
from .cnf import Formula, clause_true_counts
from .rng import SplitMix64


class Scheme(str, Enum):
    """Make/break computation scheme: C = cached incrementally, N = on demand."""

    MCBC = "mcbc"
    MCBN = "mcbn"
    MNBC = "mnbc"
    MNBN = "mnbn"

    @property
    def make_cached(self) -> bool:
        return self in (Scheme.MCBC, Scheme.MCBN)

    @property
    def break_cached(self) -> bool:
        return self in (Scheme.MCBC, Scheme.MNBC)


class ClauseSel(str, Enum):
    """Unsatisfied-clause selection strategy."""

    SBFS = "sbfs"   # rotating slotted buffer, second-oldest clause
    PBFS = "pbfs"   # dense buffer, cyclic index
    RS = "rs"       # dense buffer, uniform random index


class SlottedUnsatBuffer:
    """Insertion-ordered clause buffer with lazy empty slots.

    Satisfied clauses leave a hole instead of being swapped out; picks skip
    holes and rotate the oldest clause to the back. When the logical tail
    passes ``m_max`` (or the backing array fills up) the live entries are
    compacted to the front, preserving order.
    """

    def __init__(self, num_clauses: int, m_max: int, initial=()):
        if m_max < 1:
            raise ValueError("m_max must be >= 1")
        capacity = int(m_max) + num_clauses + 2
        self.slots = np.full(capacity, _k.EMPTY, dtype=np.int32)
        self.pos = np.full(num_clauses, -1, dtype=np.int32)
        self.meta = np.zeros(_k.BM_SIZE, dtype=np.int64)
        self.meta[_k.BM_KIND] = _k.KIND_SLOTTED
        self.meta[_k.BM_MMAX] = int(m_max)
        for c in initial:
            self.insert(c)

    @property
    def live(self) -> int:
        return int(self.meta[_k.BM_LIVE])

    @property
    def logical_size(self) -> int:
        return int(self.meta[_k.BM_TAIL])

    @property
    def defrags(self) -> int:
        return int(self.meta[_k.BM_DEFRAGS])

    def __contains__(self, c: int) -> bool:
        return self.pos[c] >= 0

    def insert(self, c: int) -> None:
        _k.buf_insert(self.slots, self.pos, self.meta, c)

    def remove(self, c: int) -> None:
        _k.buf_remove(self.slots, self.pos, self.meta, c)

    def pick(self) -> int:
        """Second-oldest clause; the oldest rotates to the back (no rotation
        when only one clause is live)."""
        if self.live == 0:
            raise ValueError("cannot pick from an empty buffer")
        return int(_k.pick_slotted(self.slots, self.pos, self.meta))

    def defragment(self) -> None:
        _k.buf_defrag(self.slots, self.pos, self.meta)

    def contents(self) -> list[int]:
        """Live clauses in insertion (FIFO) order."""
        tail = int(self.meta[_k.BM_TAIL])
        return [int(c) for c in self.slots[:tail] if c != _k.EMPTY]

    def dump(self) -> str:
        """One-line text rendering for test diagnostics."""
        tail = int(self.meta[_k.BM_TAIL])
        cells = ".".join(
            "_" if c == _k.EMPTY else str(int(c)) for c in self.slots[:tail]
        )
        return (f"slotted live={self.live} head={int(self.meta[_k.BM_HEAD])} "
                f"tail={tail} mmax={int(self.meta[_k.BM_MMAX])} [{cells}]")


class DenseUnsatBuffer:
    """Hole-free clause buffer with swap-removal and a position index."""

    def __init__(self, num_clauses: int, kind: ClauseSel = ClauseSel.PBFS, initial=()):
        if kind not in (ClauseSel.PBFS, ClauseSel.RS):
            raise ValueError("dense buffer serves the pbfs and rs strategies")
        self.slots = np.full(num_clauses, _k.EMPTY, dtype=np.int32)
        self.pos = np.full(num_clauses, -1, dtype=np.int32)
        self.meta = np.zeros(_k.BM_SIZE, dtype=np.int64)
        self.meta[_k.BM_KIND] = (
            _k.KIND_CYCLIC if kind is ClauseSel.PBFS else _k.KIND_RANDOM
        )
        self._rs = np.zeros(1, dtype=np.uint64)
        for c in initial:
            self.insert(c)

    @property
    def live(self) -> int:
        return int(self.meta[_k.BM_LIVE])

    def __contains__(self, c: int) -> bool:
        return self.pos[c] >= 0

    def insert(self, c: int) -> None:
        _k.buf_insert(self.slots, self.pos, self.meta, c)

    def remove(self, c: int) -> None:
        _k.buf_remove(self.slots, self.pos, self.meta, c)

    def pick_pbfs(self) -> int:
        if self.live == 0:
            raise ValueError("cannot pick from an empty buffer")
        return int(_k.pick_cyclic(self.slots, self.meta))

    def pick_rs(self, rng: SplitMix64) -> int:
        if self.live == 0:
            raise ValueError("cannot pick from an empty buffer")
        self._rs[0] = rng.state
        c = int(_k.pick_random(self.slots, self.meta, self._rs))
        rng.state = int(self._rs[0])
        return c

    def contents(self) -> list[int]:
        return [int(c) for c in self.slots[: self.live]]

    def dump(self) -> str:
        """One-line text rendering for test diagnostics."""
        cells = ".".join(str(c) for c in self.contents())
        return f"dense live={self.live} step={int(self.meta[_k.BM_STEP])} [{cells}]"


class SearchState:
    """One solver run's mutable state over a shared immutable formula."""

    def __init__(
        self,
        formula: Formula,
        assignment,
        scheme: Scheme = Scheme.MCBN,
        clause_sel: ClauseSel = ClauseSel.SBFS,
        m_max_factor: float = 4.5,
    ):
        a = np.array(assignment, dtype=np.int8, copy=True)
        if a.shape != (formula.n,) or not np.all((a == 0) | (a == 1)):
            raise ValueError("assignment must be a 0/1 vector of length n")
        self.formula = formula
        self.scheme = Scheme(scheme)
        self.clause_sel = ClauseSel(clause_sel)
        self.values = a
        self.make_cached = self.scheme.make_cached
        self.break_cached = self.scheme.break_cached

        cls_lits, cls_off, occ_cls, occ_off = formula.flat
        self.true_count = clause_true_counts(formula, a)
        var = cls_lits >> 1
        truth = (a[var] ^ (cls_lits & 1)).astype(bool)

        self.crit_xor = np.zeros(formula.m, dtype=np.int32)
        if self.break_cached:
            np.bitwise_xor.reduceat(
                np.where(truth, var, 0), cls_off[:-1], out=self.crit_xor
            )
        self.make = np.zeros(formula.n, dtype=np.int64)
        self.brk = np.zeros(formula.n, dtype=np.int64)
        per_lit_tc = np.repeat(self.true_count, np.diff(cls_off))
        if self.make_cached:
            np.add.at(self.make, var[per_lit_tc == 0], 1)
        if self.break_cached:
            np.add.at(self.brk, self.crit_xor[self.true_count == 1], 1)

        unsat = [int(c) for c in np.flatnonzero(self.true_count == 0)]
        if self.clause_sel is ClauseSel.SBFS:
            m_max = max(1, int(m_max_factor * formula.m))
            self.buffer = SlottedUnsatBuffer(formula.m, m_max, initial=unsat)
        else:
            self.buffer = DenseUnsatBuffer(formula.m, self.clause_sel, initial=unsat)

        self.best = np.array([len(unsat)], dtype=np.int64)
        self.best_values = a.copy()
        max_len = max((len(c) for c in formula.clauses), default=1)
        self.scores = np.zeros(max_len, dtype=np.float64)
        self._rs = np.zeros(1, dtype=np.uint64)

    @property
    def live(self) -> int:
        return self.buffer.live

    @property
    def best_unsat(self) -> int:
        return int(self.best[0])

    @property
    def best_assignment(self) -> np.ndarray:
        return self.best_values.copy()

    @property
    def defrags(self) -> int:
        meta = self.buffer.meta
        return int(meta[_k.BM_DEFRAGS])

    def flip(self, v: int) -> None:
        """Toggle one variable, updating counters, caches, buffer, incumbent."""
        if not 0 <= v < self.formula.n:
            raise ValueError(f"variable {v} out of range")
        cls_lits, cls_off, occ_cls, occ_off = self.formula.flat
        _k.flip(
            v, self.values, self.true_count, self.crit_xor, self.make, self.brk,
            self.make_cached, self.break_cached,
            cls_lits, cls_off, occ_cls, occ_off,
            self.buffer.slots, self.buffer.pos, self.buffer.meta,
            self.best, self.best_values,
        )

    def make_value(self, v: int) -> int:
        _, _, occ_cls, occ_off = self.formula.flat
        return int(
            _k.make_value(v, self.values, self.true_count, self.make,
                          self.make_cached, occ_cls, occ_off)
        )

    def break_value(self, v: int) -> int:
        _, _, occ_cls, occ_off = self.formula.flat
        return int(
            _k.break_value(v, self.values, self.true_count, self.brk,
                           self.break_cached, occ_cls, occ_off)
        )

    def all_make_break(self) -> tuple[np.ndarray, np.ndarray]:
        """Exposed make/break values for every variable (test convenience)."""
        _, _, occ_cls, occ_off = self.formula.flat
        out_make = np.zeros(self.formula.n, dtype=np.int64)
        out_brk = np.zeros(self.formula.n, dtype=np.int64)
        _k.all_make_break(self.values, self.true_count, self.make, self.brk,
                          self.make_cached, self.break_cached, occ_cls, occ_off,
                          out_make, out_brk)
        return out_make, out_brk

    def pick_clause(self, rng: SplitMix64 | None = None) -> int:
        """Pick an unsatisfied clause per the configured strategy."""
        if self.clause_sel is ClauseSel.SBFS:
            return self.buffer.pick()
        if self.clause_sel is ClauseSel.PBFS:
            return self.buffer.pick_pbfs()
        if rng is None:
            raise ValueError("random clause selection needs an rng")
        return self.buffer.pick_rs(rng)

    def unsat_clauses(self) -> list[int]:
        return self.buffer.contents()


SCORE_TABLE_SIZE = 65


def score_tables(picker: int, zeta: float, eta: float, bbase: float,
                 cb: float, kexp: float) -> tuple[np.ndarray, np.ndarray]:
    """Power-factor memo tables for the score function (bit-equivalent to
    direct evaluation; values beyond the table fall back to it)."""
    return _k.build_score_tables(picker, float(zeta), float(eta), float(bbase),
                                 float(cb), float(kexp), SCORE_TABLE_SIZE)


def kernel_pick(state: SearchState, c: int, rng: SplitMix64, picker: int,
                zeta: float = 0.0, eta: float = 0.0, bbase: float = 1.0,
                delta: float = 0.0, cb: float = 0.9, kexp: float = 2.06,
                noise: float = 0.567) -> int:
    """Low-level variable pick on clause ``c``; shared by all picker fronts."""
    if state.true_count[c] != 0:
        raise ValueError(f"clause {c} is satisfied; pickers need an unsat clause")
    cls_lits, cls_off, occ_cls, occ_off = state.formula.flat
    pow_make, pow_brk = score_tables(picker, zeta, eta, bbase, cb, kexp)
    state._rs[0] = rng.state
    v = _k.pick_var(
        c, picker, float(zeta), float(eta), float(bbase), float(delta),
        float(cb), float(kexp), float(noise), pow_make, pow_brk,
        state.values, state.true_count, state.make, state.brk,
        state.make_cached, state.break_cached,
        cls_lits, cls_off, occ_cls, occ_off, state.scores, state._rs,
    )
    rng.state = int(state._rs[0])
    return int(v)


def kernel_pick_histogram(state: SearchState, c: int, rng: SplitMix64,
                          count: int, picker: int, **kw) -> np.ndarray:
    """Histogram over variables of ``count`` repeated picks on clause ``c``."""
    if state.true_count[c] != 0:
        raise ValueError(f"clause {c} is satisfied; pickers need an unsat clause")
    zeta = kw.get("zeta", 0.0)
    eta = kw.get("eta", 0.0)
    bbase = kw.get("bbase", 1.0)
    delta = kw.get("delta", 0.0)
    cb = kw.get("cb", 0.9)
    kexp = kw.get("kexp", 2.06)
    noise = kw.get("noise", 0.567)
    cls_lits, cls_off, occ_cls, occ_off = state.formula.flat
    pow_make, pow_brk = score_tables(picker, zeta, eta, bbase, cb, kexp)
    hist = np.zeros(state.formula.n, dtype=np.int64)
    state._rs[0] = rng.state
    _k.pick_var_many(
        c, count, hist, picker, float(zeta), float(eta), float(bbase),
        float(delta), float(cb), float(kexp), float(noise), pow_make, pow_brk,
        state.values, state.true_count, state.make, state.brk,
        state.make_cached, state.break_cached,
        cls_lits, cls_off, occ_cls, occ_off, state.scores, state._rs,
    )
    rng.state = int(state._rs[0])
    return hist
