"""Uniform random k-SAT instance generator (fixed clause length model).

Each clause draws k distinct variables and negates each independently with
probability 1/2. Duplicate clauses may occur (the uniform model allows
them); duplicate variables within one clause cannot.

Variables are drawn by a running partial Fisher-Yates shuffle: the
permutation array persists across clauses and each clause randomizes its
k-prefix, which yields a uniform distinct k-subset per clause regardless
of the array's prior order. This exact procedure is the byte-level
reproducibility contract for a given seed.
"""

from __future__ import annotations

from .cnf import Formula
from .rng import SplitMix64


def generate(n: int, m: int, k: int = 3, seed: int = 0) -> Formula:
    """Deterministic uniform random k-SAT formula with m clauses over n
    variables."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if k < 1 or k > n:
        raise ValueError(f"clause length k={k} must be in [1, n={n}]")
    rng = SplitMix64(seed)
    perm = list(range(n))
    clauses = []
    for _ in range(m):
        lits = []
        for j in range(k):
            t = j + rng.next_below(n - j)
            perm[j], perm[t] = perm[t], perm[j]
            v = perm[j]
            neg = rng.next_double() < 0.5
            lits.append(2 * v + (1 if neg else 0))
        clauses.append(lits)
    return Formula(n, clauses)
