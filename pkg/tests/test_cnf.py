import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import proms
from proms import DimacsError, Formula, parse_dimacs, to_dimacs
from proms.cnf import lit_code, lit_signed
from proms.gen import generate
from proms.rng import SplitMix64

from oracles import count_unsat_rescan, min_unsat_product_enum


# ---------------------------------------------------------------- parsing

def test_parse_basic():
    f = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n")
    assert (f.n, f.m) == (3, 2)
    assert f.r == pytest.approx(2 / 3)
    assert f.clauses == ((lit_code(1), lit_code(-2)), (lit_code(2), lit_code(3)))


def test_parse_with_comment():
    f = parse_dimacs("c comment\np cnf 1 1\n1 0\n")
    assert (f.n, f.m) == (1, 1)


def test_parse_bytes_and_multiline_clause():
    f = parse_dimacs(b"p cnf 4 2\n1 2\n3 0 -1\n-4 2 0\n")
    assert f.m == 2
    assert len(f.clauses[0]) == 3


def test_parse_comment_between_clauses_and_trailing_ws():
    f = parse_dimacs("p cnf 2 2\n1 2 0   \nc middle\n-1 -2 0\n\n")
    assert f.m == 2


def test_parse_percent_terminator():
    f = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n")
    assert f.m == 1


@pytest.mark.parametrize("text,fragment", [
    ("p cnf 2 1\n1 3 0\n", "out of range"),
    ("p cnf 2 1\n1 -3 0\n", "out of range"),
    ("p cnf 2 2\n1 0\n", "declares 2 clauses"),
    ("p cnf 2 1\n1 0\n2 0\n", "declares 1 clauses"),
    ("p cnf 2 1\n0\n", "empty clause"),
    ("p cnf 2 1\n1 1 0\n", "more than once"),
    ("p cnf 2 1\n1 -1 0\n", "more than once"),
    ("p wcnf 2 1\n1 2 0\n", "not supported"),
    ("p cnf x 1\n1 0\n", "malformed header"),
    ("p cnf 2\n1 0\n", "malformed header"),
    ("1 2 0\n", "before"),
    ("p cnf 2 1\n1 2\n", "not 0-terminated"),
    ("p cnf 2 1\n1 banana 0\n", "bad token"),
    ("p cnf 2 1\np cnf 2 1\n1 0\n", "duplicate header"),
    ("c only comments\n", "missing"),
], ids=lambda x: x[:24] if isinstance(x, str) else "")
def test_parse_errors(text, fragment):
    with pytest.raises(DimacsError, match=fragment):
        parse_dimacs(text)


def test_lit_code_roundtrip():
    for lit in (1, -1, 5, -13):
        assert lit_signed(lit_code(lit)) == lit


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(4, 30), st.integers(1, 80),
       st.integers(1, 3))
def test_roundtrip_and_occ_inverse(seed, n, m, k):
    f = generate(n, m, min(k, n), seed=seed)
    assert parse_dimacs(to_dimacs(f)) == f
    # occ is exactly the inverse of clauses
    for code, cls in enumerate(f.occ):
        for ci in cls:
            assert code in f.clauses[ci]
    assert sum(len(c) for c in f.clauses) == sum(len(o) for o in f.occ)


def test_formula_rejects_empty_clause():
    with pytest.raises(ValueError, match="empty"):
        Formula(2, [[]])


def test_zero_clause_formula():
    f = parse_dimacs("p cnf 3 0\n")
    assert f.m == 0
    a = np.zeros(3, dtype=np.int8)
    assert proms.count_unsat(f, a) == 0
    res = proms.solve(f, proms.default_params(f, max_steps=10))
    assert res.best_unsat == 0 and res.steps_executed == 0


# ---------------------------------------------------------- assignments

def test_random_assignment_deterministic():
    a = proms.random_assignment(5, SplitMix64(9))
    b = proms.random_assignment(5, SplitMix64(9))
    assert np.array_equal(a, b)


def test_random_assignment_single_var():
    a = proms.random_assignment(1, SplitMix64(0))
    assert a[0] in (0, 1)


def test_random_assignment_mean():
    a = proms.random_assignment(10_000, SplitMix64(123))
    assert 0.45 <= a.mean() <= 0.55


def test_random_assignment_rejects_zero():
    with pytest.raises(ValueError):
        proms.random_assignment(0, SplitMix64(0))


# ----------------------------------------------------------- count_unsat

def test_count_unsat_examples():
    f = Formula.from_signed(1, [(1,), (-1,)])
    assert proms.count_unsat(f, np.array([1], dtype=np.int8)) == 1
    g = Formula.from_signed(2, [(1, 2)])
    assert proms.count_unsat(g, np.array([1, 0], dtype=np.int8)) == 0


def test_count_unsat_matches_rescan():
    f = generate(20, 91, 3, seed=17)
    rng = SplitMix64(4)
    for _ in range(20):
        a = proms.random_assignment(f.n, rng)
        assert proms.count_unsat(f, a) == count_unsat_rescan(f, a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000))
def test_sat_unsat_complement(seed):
    f = generate(12, 40, 3, seed=seed)
    a = proms.random_assignment(f.n, SplitMix64(seed + 1))
    unsat = proms.count_unsat(f, a)
    n_sat = sum(1 for cl in f.clauses
                if any(bool(a[c >> 1] ^ (c & 1)) for c in cl))
    assert unsat + n_sat == f.m


# ------------------------------------------------------------ make/break

def test_make_break_examples():
    f = Formula.from_signed(2, [(1, 2)])
    assert proms.brute_force_make_break(f, np.array([0, 0], dtype=np.int8), 0) == (1, 0)
    g = Formula.from_signed(1, [(1,)])
    assert proms.brute_force_make_break(g, np.array([1], dtype=np.int8), 0) == (0, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.integers(0, 29))
def test_flip_changes_unsat_by_break_minus_make(seed, v):
    f = generate(30, 130, 3, seed=seed)
    a = proms.random_assignment(f.n, SplitMix64(seed))
    make, brk = proms.brute_force_make_break(f, a, v)
    before = proms.count_unsat(f, a)
    b = a.copy()
    b[v] ^= 1
    assert proms.count_unsat(f, b) - before == brk - make


def test_batched_oracle_matches_scalar():
    f = generate(25, 110, 3, seed=5)
    rng = SplitMix64(6)
    for _ in range(5):
        a = proms.random_assignment(f.n, rng)
        am, ab = proms.brute_force_make_break_all(f, a)
        for v in range(f.n):
            assert (am[v], ab[v]) == proms.brute_force_make_break(f, a, v)


# --------------------------------------------------------------- optimum

def test_optimum_contradiction():
    f = Formula.from_signed(1, [(1,), (-1,)])
    assert proms.brute_force_optimum(f) == 1


def test_optimum_satisfiable():
    f = Formula.from_signed(3, [(1, 2), (-1, 3), (2, 3)])
    assert proms.brute_force_optimum(f) == 0


def test_optimum_two_enumeration_orders_agree():
    f = generate(12, 120, 3, seed=31)
    assert proms.brute_force_optimum(f) == min_unsat_product_enum(f)


def test_optimum_guard():
    f = generate(25, 50, 3, seed=1)
    with pytest.raises(ValueError, match="too large"):
        proms.brute_force_optimum(f)
