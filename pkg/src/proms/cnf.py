"""CNF formulas, DIMACS parsing, assignments, and slow reference oracles.

Literals use the packed-code convention: variable ``v`` (0-based) appears as
code ``2*v`` when positive and ``2*v + 1`` when negated. Signed 1-based
literals exist only at the DIMACS boundary.

The ``brute_force_*`` functions recompute everything from scratch on every
call. They are deliberately dumb: the incremental search state is tested
against them, so they must not share any bookkeeping with it.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .rng import SplitMix64

Assignment = np.ndarray  # int8 vector of 0/1, one entry per variable


class DimacsError(ValueError):
    """Raised for malformed DIMACS CNF input."""


def lit_code(signed: int) -> int:
    """Signed 1-based DIMACS literal -> internal code."""
    v = abs(signed) - 1
    return 2 * v + (1 if signed < 0 else 0)


def lit_signed(code: int) -> int:
    """Internal code -> signed 1-based DIMACS literal."""
    v = (code >> 1) + 1
    return -v if code & 1 else v


def lit_var(code: int) -> int:
    return code >> 1


def lit_is_true(code: int, a: Assignment) -> bool:
    """Truth of a literal under an assignment (code 2v true iff a[v]=1)."""
    return bool(a[code >> 1] ^ (code & 1))


class Formula:
    """Immutable CNF over ``n`` variables.

    clauses  tuple of tuples of literal codes, in input order
    occ      for each literal code, the tuple of clause indices containing it
    r        clause-to-variable ratio m/n
    """

    __slots__ = ("n", "m", "clauses", "occ", "_flat")

    def __init__(self, n: int, clauses):
        if n < 1:
            raise ValueError("formula needs at least one variable")
        canon = []
        for ci, clause in enumerate(clauses):
            lits = tuple(int(l) for l in clause)
            if not lits:
                raise ValueError(f"clause {ci} is empty")
            seen = set()
            for code in lits:
                if not 0 <= code < 2 * n:
                    raise ValueError(f"clause {ci}: literal code {code} out of range")
                v = code >> 1
                if v in seen:
                    raise ValueError(
                        f"clause {ci}: variable {v + 1} occurs more than once"
                    )
                seen.add(v)
            canon.append(lits)
        self.n = n
        self.m = len(canon)
        self.clauses = tuple(canon)
        occ: list[list[int]] = [[] for _ in range(2 * n)]
        for ci, lits in enumerate(self.clauses):
            for code in lits:
                occ[code].append(ci)
        self.occ = tuple(tuple(o) for o in occ)
        self._flat = None

    @classmethod
    def from_signed(cls, n: int, clauses) -> "Formula":
        """Build from signed 1-based literals, e.g. ``[(1, -2), (2, 3)]``."""
        return cls(n, [[lit_code(l) for l in clause] for clause in clauses])

    @property
    def r(self) -> float:
        return self.m / self.n

    @property
    def flat(self):
        """Flattened int32 views (cls_lits, cls_off, occ_cls, occ_off)."""
        if self._flat is None:
            cls_lits = np.fromiter(
                (c for clause in self.clauses for c in clause),
                dtype=np.int32,
                count=sum(len(c) for c in self.clauses),
            )
            cls_off = np.zeros(self.m + 1, dtype=np.int32)
            np.cumsum([len(c) for c in self.clauses], out=cls_off[1:])
            occ_cls = np.fromiter(
                (c for lst in self.occ for c in lst), dtype=np.int32, count=len(cls_lits)
            )
            occ_off = np.zeros(2 * self.n + 1, dtype=np.int32)
            np.cumsum([len(o) for o in self.occ], out=occ_off[1:])
            self._flat = (cls_lits, cls_off, occ_cls, occ_off)
        return self._flat

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Formula)
            and self.n == other.n
            and self.clauses == other.clauses
        )

    def __hash__(self):
        return hash((self.n, self.clauses))

    def __repr__(self):
        return f"Formula(n={self.n}, m={self.m}, r={self.r:.3f})"


def parse_dimacs(text) -> Formula:
    """Parse DIMACS CNF from a str or bytes blob.

    Accepts comment lines (`c ...`) anywhere, one `p cnf n m` header before
    the clauses, and clauses as 0-terminated integer runs that may span
    lines. A line starting with `%` ends the input (benchmark-file idiom).
    Weighted headers (`p wcnf`) are rejected.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    n = m = -1
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if n >= 0:
                raise DimacsError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) == 4 and parts[1] == "wcnf":
                raise DimacsError(
                    f"line {lineno}: weighted CNF (p wcnf) is not supported; "
                    "only unweighted `p cnf` instances are accepted"
                )
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if n < 1 or m < 0:
                raise DimacsError(f"line {lineno}: bad header counts n={n} m={m}")
            continue
        if n < 0:
            raise DimacsError(f"line {lineno}: clause before `p cnf` header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                if not current:
                    raise DimacsError(f"line {lineno}: empty clause")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > n:
                    raise DimacsError(
                        f"line {lineno}: literal {lit} out of range (n={n})"
                    )
                current.append(lit)
    if n < 0:
        raise DimacsError("missing `p cnf` header")
    if current:
        raise DimacsError("last clause is not 0-terminated")
    if len(clauses) != m:
        raise DimacsError(f"header declares {m} clauses, found {len(clauses)}")
    try:
        return Formula(n, [[lit_code(l) for l in cl] for cl in clauses])
    except ValueError as e:
        raise DimacsError(str(e)) from None


def parse_dimacs_file(path) -> Formula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())


def to_dimacs(f: Formula) -> str:
    lines = [f"p cnf {f.n} {f.m}"]
    for clause in f.clauses:
        lines.append(" ".join(str(lit_signed(c)) for c in clause) + " 0")
    return "\n".join(lines) + "\n"


def random_assignment(n: int, rng: SplitMix64) -> Assignment:
    """Each variable independently 0/1, drawn in ascending variable order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = np.empty(n, dtype=np.int8)
    for v in range(n):
        a[v] = 1 if rng.next_double() < 0.5 else 0
    return a


def clause_true_counts(f: Formula, a: Assignment) -> np.ndarray:
    """Number of satisfied literals per clause (int32 vector)."""
    cls_lits, cls_off, _, _ = f.flat
    truth = (a[cls_lits >> 1] ^ (cls_lits & 1)).astype(np.int32)
    return np.add.reduceat(truth, cls_off[:-1])


def count_unsat(f: Formula, a: Assignment) -> int:
    """Number of clauses with no true literal."""
    return int(np.count_nonzero(clause_true_counts(f, a) == 0))


def brute_force_make_break(f: Formula, a: Assignment, v: int) -> tuple[int, int]:
    """Make/break of flipping ``v``, by rescanning every clause twice.

    make  clauses going unsat -> sat;  break  clauses going sat -> unsat.
    """
    if not 0 <= v < f.n:
        raise ValueError(f"variable {v} out of range")
    b = a.copy()
    b[v] ^= 1
    make = brk = 0
    for clause in f.clauses:
        before = any(lit_is_true(c, a) for c in clause)
        after = any(lit_is_true(c, b) for c in clause)
        if after and not before:
            make += 1
        elif before and not after:
            brk += 1
    return make, brk


def brute_force_make_break_all(f: Formula, a: Assignment) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized full-rescan make/break for every variable at once.

    Same quantity as :func:`brute_force_make_break` (the two are pinned
    against each other in tests); used where per-variable calls would be
    too slow. A clause with no true literal contributes one make to each of
    its variables; a clause with exactly one true literal contributes one
    break to that literal's variable.
    """
    cls_lits, cls_off, _, _ = f.flat
    var = cls_lits >> 1
    truth = (a[var] ^ (cls_lits & 1)).astype(bool)
    tc = np.add.reduceat(truth.astype(np.int32), cls_off[:-1])
    per_lit_tc = np.repeat(tc, np.diff(cls_off))
    make = np.zeros(f.n, dtype=np.int64)
    np.add.at(make, var[per_lit_tc == 0], 1)
    brk = np.zeros(f.n, dtype=np.int64)
    np.add.at(brk, var[(per_lit_tc == 1) & truth], 1)
    return make, brk


_ENUM_LIMIT = 24


@lru_cache(maxsize=2)
def _value_columns(n: int) -> tuple:
    idx = np.arange(1 << n, dtype=np.uint32)
    return tuple(((idx >> v) & 1).astype(bool) for v in range(n))


def brute_force_optimum(f: Formula) -> int:
    """Exact minimum unsat count by enumerating all 2^n assignments.

    Guarded at n <= 24; evaluation is vectorized one clause at a time over
    the full assignment table.
    """
    if f.n > _ENUM_LIMIT:
        raise ValueError(f"n={f.n} too large for exhaustive enumeration (limit {_ENUM_LIMIT})")
    cols = _value_columns(f.n)
    size = 1 << f.n
    unsat = np.zeros(size, dtype=np.int32)
    sat = np.empty(size, dtype=bool)
    tmp = np.empty(size, dtype=bool)
    for clause in f.clauses:
        first = clause[0]
        np.logical_xor(cols[first >> 1], bool(first & 1), out=sat)
        for code in clause[1:]:
            np.logical_xor(cols[code >> 1], bool(code & 1), out=tmp)
            np.logical_or(sat, tmp, out=sat)
        unsat += ~sat
    return int(unsat.min())
