import math

import numpy as np
import pytest

import proms
from proms import parse_dimacs, to_dimacs
from proms.gen import generate
from proms.rng import SplitMix64


def test_k_equals_n_single_clause():
    f = generate(3, 1, 3, seed=0)
    assert f.m == 1
    assert sorted(code >> 1 for code in f.clauses[0]) == [0, 1, 2]


def test_deterministic_output():
    a = to_dimacs(generate(50, 200, 3, seed=77))
    b = to_dimacs(generate(50, 200, 3, seed=77))
    assert a == b
    c = to_dimacs(generate(50, 200, 3, seed=78))
    assert a != c


def test_roundtrip():
    f = generate(40, 160, 3, seed=5)
    assert parse_dimacs(to_dimacs(f)) == f


def test_no_duplicate_vars_within_clause():
    f = generate(10, 500, 3, seed=6)
    for clause in f.clauses:
        vs = [code >> 1 for code in clause]
        assert len(set(vs)) == len(vs)


def test_duplicate_clauses_allowed():
    # tiny variable pool, many clauses: duplicates are inevitable and fine
    f = generate(4, 200, 2, seed=7)
    assert f.m == 200
    assert len(set(f.clauses)) < 200


def test_k_bounds():
    with pytest.raises(ValueError):
        generate(3, 5, 4)
    with pytest.raises(ValueError):
        generate(3, 5, 0)
    assert generate(5, 3, 5, seed=1).m == 3


def test_occurrence_and_sign_statistics():
    n, m, k = 100, 10_000, 3
    f = generate(n, m, k, seed=901)
    per_var = np.zeros(n)
    positives = 0
    for clause in f.clauses:
        for code in clause:
            per_var[code >> 1] += 1
            positives += (code & 1) == 0
    mean = k * m / n
    sigma = math.sqrt(m * (k / n) * (1 - k / n))
    assert np.all(np.abs(per_var - mean) <= 4 * sigma)
    total = k * m
    assert abs(positives - total / 2) <= 4 * math.sqrt(total * 0.25)


def test_random_assignment_satisfies_seven_eighths():
    f = generate(200, 10_000, 3, seed=902)
    a = proms.random_assignment(f.n, SplitMix64(903))
    frac = 1.0 - proms.count_unsat(f, a) / f.m
    sigma = math.sqrt((7 / 8) * (1 / 8) / f.m)
    assert abs(frac - 7 / 8) <= 4 * sigma
