"""First-moment analysis of near-optimal assignments in uniform random 3-CNF.

For a random 3-CNF with n variables and m clauses, a fixed assignment
satisfies each clause independently with probability 7/8. The expected
count of (assignment, s-subset-of-clauses) pairs where the whole subset is
satisfied is then ``2^n * (7/8)^s * C(m, s)``; setting s = lambda*m and
letting m grow yields a per-clause base-2 exponent whose root in lambda
gives the largest satisfiable fraction ``h(r)`` as a function of the
clause-to-variable ratio r. All arithmetic stays in log2 domain.
"""

from __future__ import annotations

import math

LOG2_SAT = math.log2(7.0 / 8.0)  # per-clause log2 satisfaction probability


def log2_binomial(m: float, s: float) -> float:
    """log2 C(m, s) via log-gamma; exact enough up to m ~ 1e7."""
    if s < 0 or s > m:
        raise ValueError("need 0 <= s <= m")
    return (
        math.lgamma(m + 1) - math.lgamma(s + 1) - math.lgamma(m - s + 1)
    ) / math.log(2.0)


def log2_expected_count(n: float, m: float, s: float) -> float:
    """log2 of 2^n * (7/8)^s * C(m, s)."""
    return n + s * LOG2_SAT + log2_binomial(m, s)


def exponent_per_clause(r: float, lam: float) -> float:
    """Per-clause base-2 exponent of the expected count at s = lambda*m:
    1/r + log2(1/(1-lambda)) + lambda*log2(7(1-lambda)/(8*lambda))."""
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must be in (0, 1)")
    if r <= 0:
        raise ValueError("ratio must be positive")
    return (
        1.0 / r
        + math.log2(1.0 / (1.0 - lam))
        + lam * math.log2(7.0 * (1.0 - lam) / (8.0 * lam))
    )


def constant_violation_threshold() -> float:
    """Ratio above which assignments violating only O(1) clauses vanish:
    -1 / log2(7/8), about 5.19."""
    return -1.0 / LOG2_SAT


_BRACKET_LO = 7.0 / 8.0 + 1e-6
_BRACKET_HI = 1.0 - 1e-9


def h_of_r(r: float, tol: float = 1e-9) -> float:
    """Largest satisfiable fraction for ratio ``r``: the root in
    (7/8, 1) of the per-clause exponent, found by bisection.

    Raises ValueError when the exponent has no sign change in the bracket,
    which happens at and below the constant-violation threshold.
    """
    lo, hi = _BRACKET_LO, _BRACKET_HI
    f_lo = exponent_per_clause(r, lo)
    f_hi = exponent_per_clause(r, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(
            f"no root bracketed for r={r}; the ratio must exceed "
            f"{constant_violation_threshold():.4f}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = exponent_per_clause(r, mid)
        if abs(f_mid) < tol:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo <= 0.0:
            break
    return 0.5 * (lo + hi)


def hamming_gap(r: float, lam: float, n: float) -> float:
    """Expected Hamming distance from a random assignment to the nearest
    of the ~2^(n * e * r) assignments satisfying lambda*m clauses:
    n - log2(count), with the count capped at 2^n.

    Requires a non-negative per-clause exponent (such assignments are
    plentiful).
    """
    epc = exponent_per_clause(r, lam)
    if epc < 0:
        raise ValueError("per-clause exponent is negative: no such assignments")
    log2_count_per_n = min(1.0, epc * r)
    return n * (1.0 - log2_count_per_n)
