"""Anytime Max-SAT stochastic local search.

Variable selection samples from a probability distribution over both make
and break values; unsatisfied clauses are tracked in a rotating
insertion-ordered buffer. Includes break-only and noise-based reference
pickers, a uniform random k-SAT generator, a first-moment analysis of
near-optimal assignment counts, and a benchmark harness.
"""

from .baselines import BaselineParams, probsat_pick, walksat_pick
from .bench import (
    BenchConfig,
    BenchReport,
    ClassSummary,
    aggregate,
    flips_per_second_probe,
    render_jsonl,
    render_table,
    run_bench,
)
from .cnf import (
    Assignment,
    DimacsError,
    Formula,
    brute_force_make_break,
    brute_force_make_break_all,
    brute_force_optimum,
    count_unsat,
    parse_dimacs,
    parse_dimacs_file,
    random_assignment,
    to_dimacs,
)
from .gen import generate
from .rng import SplitMix64
from .solver import (
    RunResult,
    SolverParams,
    default_params,
    pick_variable,
    score,
    solve,
)
from .state import (
    ClauseSel,
    DenseUnsatBuffer,
    Scheme,
    SearchState,
    SlottedUnsatBuffer,
)
from .theory import (
    constant_violation_threshold,
    exponent_per_clause,
    h_of_r,
    hamming_gap,
    log2_expected_count,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BaselineParams",
    "BenchConfig",
    "BenchReport",
    "ClassSummary",
    "ClauseSel",
    "DenseUnsatBuffer",
    "DimacsError",
    "Formula",
    "RunResult",
    "Scheme",
    "SearchState",
    "SlottedUnsatBuffer",
    "SolverParams",
    "SplitMix64",
    "aggregate",
    "brute_force_make_break",
    "brute_force_make_break_all",
    "brute_force_optimum",
    "constant_violation_threshold",
    "count_unsat",
    "default_params",
    "exponent_per_clause",
    "flips_per_second_probe",
    "generate",
    "h_of_r",
    "hamming_gap",
    "log2_expected_count",
    "parse_dimacs",
    "parse_dimacs_file",
    "pick_variable",
    "probsat_pick",
    "random_assignment",
    "render_jsonl",
    "render_table",
    "run_bench",
    "score",
    "solve",
    "to_dimacs",
    "walksat_pick",
]
