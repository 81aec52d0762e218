"""Compiled inner loops shared by the search state, pickers, and solver.

Everything here operates on flat numpy arrays owned by the Python-level
wrapper objects; no logic is duplicated outside this module. All random
draws come from the SplitMix64 stream in a one-element uint64 array, kept
bit-compatible with :class:`proms.rng.SplitMix64`.

Buffer metadata layout (int64 vector ``bm``):
  [0] kind   0=slotted/rotating, 1=dense+cyclic pick, 2=dense+random pick
  [1] head   first possibly-live slot (slotted only)
  [2] tail   one past the last occupied slot / dense size
  [3] live   number of clauses currently stored
  [4] m_max  logical-size threshold that triggers defragmentation (slotted)
  [5] step   cyclic pick counter (dense kind 1)
  [6] defrags  number of defragmentation passes performed
"""

import numpy as np
from numba import njit

EMPTY = np.int32(-1)

BM_KIND = 0
BM_HEAD = 1
BM_TAIL = 2
BM_LIVE = 3
BM_MMAX = 4
BM_STEP = 5
BM_DEFRAGS = 6
BM_SIZE = 7

KIND_SLOTTED = 0
KIND_CYCLIC = 1
KIND_RANDOM = 2

PICKER_PROMS = 0
PICKER_PROBSAT = 1
PICKER_WALKSAT = 2

STATUS_CHUNK = 0
STATUS_IMPROVED = 1
STATUS_TARGET = 2

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, inline="always")
def rng_u64(rs):
    rs[0] = rs[0] + _GAMMA
    z = rs[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    z = z ^ (z >> _S31)
    return z


@njit(cache=True, inline="always")
def rng_f64(rs):
    return (rng_u64(rs) >> _S11) * _INV53


@njit(cache=True)
def rng_fill(rs, out):
    for i in range(out.shape[0]):
        out[i] = rng_f64(rs)


@njit(cache=True)
def buf_defrag(slots, pos, bm):
    """Compact live entries to the front, preserving their relative order."""
    tail = bm[BM_TAIL]
    w = 0
    for i in range(tail):
        c = slots[i]
        if c != EMPTY:
            slots[w] = c
            pos[c] = w
            w += 1
    for i in range(w, tail):
        slots[i] = EMPTY
    bm[BM_HEAD] = 0
    bm[BM_TAIL] = w
    bm[BM_DEFRAGS] += 1


@njit(cache=True, inline="always")
def buf_insert(slots, pos, bm, c):
    if bm[BM_KIND] == KIND_SLOTTED and bm[BM_TAIL] >= slots.shape[0]:
        buf_defrag(slots, pos, bm)
    t = bm[BM_TAIL]
    slots[t] = c
    pos[c] = t
    bm[BM_TAIL] = t + 1
    bm[BM_LIVE] += 1


@njit(cache=True, inline="always")
def buf_remove(slots, pos, bm, c):
    p = pos[c]
    pos[c] = -1
    if bm[BM_KIND] == KIND_SLOTTED:
        slots[p] = EMPTY
    else:
        last = bm[BM_TAIL] - 1
        if p != last:
            moved = slots[last]
            slots[p] = moved
            pos[moved] = p
        slots[last] = EMPTY
        bm[BM_TAIL] = last
    bm[BM_LIVE] -= 1


@njit(cache=True)
def pick_slotted(slots, pos, bm):
    """Return the second-oldest clause; rotate the oldest to the back.

    With a single live clause it is returned as-is, without rotation.
    Defragmentation runs when the logical tail passes m_max (or the array
    itself is full, so the rotation always has a free slot).
    """
    if bm[BM_LIVE] == 1:
        h = bm[BM_HEAD]
        while slots[h] == EMPTY:
            h += 1
        bm[BM_HEAD] = h
        return slots[h]
    if bm[BM_TAIL] >= slots.shape[0]:
        buf_defrag(slots, pos, bm)
    h = bm[BM_HEAD]
    while slots[h] == EMPTY:
        h += 1
    j = h + 1
    while slots[j] == EMPTY:
        j += 1
    first = slots[h]
    second = slots[j]
    slots[h] = EMPTY
    t = bm[BM_TAIL]
    slots[t] = first
    pos[first] = t
    bm[BM_TAIL] = t + 1
    bm[BM_HEAD] = j
    if bm[BM_TAIL] > bm[BM_MMAX]:
        buf_defrag(slots, pos, bm)
    return second


@njit(cache=True)
def pick_cyclic(slots, bm):
    c = slots[bm[BM_STEP] % bm[BM_TAIL]]
    bm[BM_STEP] += 1
    return c


@njit(cache=True)
def pick_random(slots, bm, rs):
    size = bm[BM_TAIL]
    i = int(rng_f64(rs) * size)
    if i >= size:
        i = size - 1
    return slots[i]


@njit(cache=True)
def flip(v, values, tc, crit, make, brk, mk_c, bk_c,
         cls_lits, cls_off, occ_cls, occ_off,
         slots, pos, bm, best, best_values):
    """Toggle ``v`` and update counters, caches, buffer, and incumbent.

    make[w] counts unsat clauses containing w, so it changes only on 0<->1
    transitions of the true-literal count. brk[w] counts clauses where w is
    the sole satisfier; crit holds the xor of true-literal variables per
    clause so the sole satisfier is recoverable at counts 1 and 2.
    """
    old = values[v]
    values[v] = 1 - old
    gain = 2 * v + old      # literal that just became true
    lose = gain ^ 1
    for i in range(occ_off[gain], occ_off[gain + 1]):
        c = occ_cls[i]
        t = tc[c]
        tc[c] = t + 1
        if t == 0:
            buf_remove(slots, pos, bm, c)
            if mk_c:
                for j in range(cls_off[c], cls_off[c + 1]):
                    make[cls_lits[j] >> 1] -= 1
            if bk_c:
                brk[v] += 1
                crit[c] ^= v
        elif bk_c:
            if t == 1:
                brk[crit[c]] -= 1
            crit[c] ^= v
    for i in range(occ_off[lose], occ_off[lose + 1]):
        c = occ_cls[i]
        t = tc[c]
        tc[c] = t - 1
        if t == 1:
            buf_insert(slots, pos, bm, c)
            if mk_c:
                for j in range(cls_off[c], cls_off[c + 1]):
                    make[cls_lits[j] >> 1] += 1
            if bk_c:
                brk[v] -= 1
                crit[c] ^= v
        elif bk_c:
            if t == 2:
                brk[crit[c] ^ v] += 1
            crit[c] ^= v
    if bm[BM_LIVE] < best[0]:
        best[0] = bm[BM_LIVE]
        for i in range(values.shape[0]):
            best_values[i] = values[i]


@njit(cache=True, inline="always")
def make_on_demand(v, values, tc, occ_cls, occ_off):
    false_lit = 2 * v + values[v]
    cnt = 0
    for i in range(occ_off[false_lit], occ_off[false_lit + 1]):
        if tc[occ_cls[i]] == 0:
            cnt += 1
    return cnt


@njit(cache=True, inline="always")
def break_on_demand(v, values, tc, occ_cls, occ_off):
    true_lit = 2 * v + (1 - values[v])
    cnt = 0
    for i in range(occ_off[true_lit], occ_off[true_lit + 1]):
        if tc[occ_cls[i]] == 1:
            cnt += 1
    return cnt


@njit(cache=True, inline="always")
def make_value(v, values, tc, make, mk_c, occ_cls, occ_off):
    if mk_c:
        return make[v]
    return make_on_demand(v, values, tc, occ_cls, occ_off)


@njit(cache=True, inline="always")
def break_value(v, values, tc, brk, bk_c, occ_cls, occ_off):
    if bk_c:
        return brk[v]
    return break_on_demand(v, values, tc, occ_cls, occ_off)


@njit(cache=True)
def all_make_break(values, tc, make, brk, mk_c, bk_c, occ_cls, occ_off,
                   out_make, out_brk):
    for v in range(values.shape[0]):
        out_make[v] = make_value(v, values, tc, make, mk_c, occ_cls, occ_off)
        out_brk[v] = break_value(v, values, tc, brk, bk_c, occ_cls, occ_off)


@njit(cache=True)
def build_score_tables(picker, zeta, eta, bbase, cb, kexp, size):
    """Memo tables for the power factors of the score function, computed
    with the exact expressions the fallback path uses (bit-equivalent)."""
    pow_make = np.empty(size, dtype=np.float64)
    pow_brk = np.empty(size, dtype=np.float64)
    for i in range(size):
        pow_make[i] = float(i) ** zeta
        if picker == PICKER_PROBSAT:
            pow_brk[i] = (cb + i) ** (-kexp)
        else:
            pow_brk[i] = (bbase + i) ** eta
    return pow_make, pow_brk


@njit(cache=True)
def pick_var(c, picker, zeta, eta, bbase, delta, cb, kexp, noise,
             pow_make, pow_brk,
             values, tc, make, brk, mk_c, bk_c,
             cls_lits, cls_off, occ_cls, occ_off, scores, rs):
    """Pick a variable of unsatisfied clause ``c`` per the active picker.

    The distribution pickers consume exactly one draw per call (including
    the below-threshold uniform fallback of the make/break picker); the
    noise-based picker consumes one or two.
    """
    lo = cls_off[c]
    clen = cls_off[c + 1] - lo
    if picker == PICKER_WALKSAT:
        n_zero = 0
        min_b = np.int64(2 ** 62)
        for i in range(clen):
            v = cls_lits[lo + i] >> 1
            b = break_value(v, values, tc, brk, bk_c, occ_cls, occ_off)
            scores[i] = b
            if b == 0:
                n_zero += 1
            if b < min_b:
                min_b = b
        if n_zero > 0:
            k = int(rng_f64(rs) * n_zero)
            if k >= n_zero:
                k = n_zero - 1
            for i in range(clen):
                if scores[i] == 0.0:
                    if k == 0:
                        return cls_lits[lo + i] >> 1
                    k -= 1
        u = rng_f64(rs)
        if u < noise:
            i = int(rng_f64(rs) * clen)
            if i >= clen:
                i = clen - 1
            return cls_lits[lo + i] >> 1
        n_min = 0
        for i in range(clen):
            if scores[i] == min_b:
                n_min += 1
        k = int(rng_f64(rs) * n_min)
        if k >= n_min:
            k = n_min - 1
        for i in range(clen):
            if scores[i] == min_b:
                if k == 0:
                    return cls_lits[lo + i] >> 1
                k -= 1
        return cls_lits[lo] >> 1  # unreachable
    # distribution pickers
    tau = 0.0
    for i in range(clen):
        v = cls_lits[lo + i] >> 1
        b = break_value(v, values, tc, brk, bk_c, occ_cls, occ_off)
        if b < pow_brk.shape[0]:
            fb = pow_brk[b]
        elif picker == PICKER_PROBSAT:
            fb = (cb + b) ** (-kexp)
        else:
            fb = (bbase + b) ** eta
        if picker == PICKER_PROBSAT:
            f = fb
        else:
            mk = make_value(v, values, tc, make, mk_c, occ_cls, occ_off)
            if mk < pow_make.shape[0]:
                f = pow_make[mk] * fb
            else:
                f = float(mk) ** zeta * fb
        scores[i] = f
        tau += f
    u = rng_f64(rs)
    if picker == PICKER_PROMS and not tau > delta:
        # no promising variable: uniform over the clause
        i = int(u * clen)
        if i >= clen:
            i = clen - 1
        return cls_lits[lo + i] >> 1
    if np.isinf(tau):
        best_i = 0
        best_f = scores[0]
        for i in range(1, clen):
            if scores[i] > best_f:
                best_f = scores[i]
                best_i = i
        return cls_lits[lo + best_i] >> 1
    thr = u * tau
    acc = 0.0
    for i in range(clen):
        acc += scores[i]
        if thr < acc:
            return cls_lits[lo + i] >> 1
    return cls_lits[lo + clen - 1] >> 1


@njit(cache=True)
def pick_var_many(c, count, hist, picker, zeta, eta, bbase, delta, cb, kexp, noise,
                  pow_make, pow_brk,
                  values, tc, make, brk, mk_c, bk_c,
                  cls_lits, cls_off, occ_cls, occ_off, scores, rs):
    """Sampling helper for distribution tests: histogram of repeated picks."""
    for _ in range(count):
        v = pick_var(c, picker, zeta, eta, bbase, delta, cb, kexp, noise,
                     pow_make, pow_brk,
                     values, tc, make, brk, mk_c, bk_c,
                     cls_lits, cls_off, occ_cls, occ_off, scores, rs)
        hist[v] += 1


@njit(cache=True)
def run_chunk(chunk, target, picker, zeta, eta, bbase, delta, cb, kexp, noise,
              pow_make, pow_brk,
              values, tc, crit, make, brk, mk_c, bk_c,
              cls_lits, cls_off, occ_cls, occ_off,
              slots, pos, bm, best, best_values, scores, rs,
              trace, trace_base):
    """Run up to ``chunk`` flips; return (steps done, status).

    Returns early after any incumbent improvement so the caller can
    timestamp it, and when the incumbent reaches ``target``.
    """
    steps = 0
    while steps < chunk:
        if best[0] <= target or bm[BM_LIVE] == 0:
            return steps, STATUS_TARGET
        kind = bm[BM_KIND]
        if kind == KIND_SLOTTED:
            c = pick_slotted(slots, pos, bm)
        elif kind == KIND_CYCLIC:
            c = pick_cyclic(slots, bm)
        else:
            c = pick_random(slots, bm, rs)
        v = pick_var(c, picker, zeta, eta, bbase, delta, cb, kexp, noise,
                     pow_make, pow_brk,
                     values, tc, make, brk, mk_c, bk_c,
                     cls_lits, cls_off, occ_cls, occ_off, scores, rs)
        prev_best = best[0]
        flip(v, values, tc, crit, make, brk, mk_c, bk_c,
             cls_lits, cls_off, occ_cls, occ_off,
             slots, pos, bm, best, best_values)
        if trace.shape[0] > 0:
            trace[trace_base + steps] = v
        steps += 1
        if best[0] < prev_best:
            return steps, STATUS_IMPROVED
    return steps, STATUS_CHUNK
