"""Exact solvers for OWA-based approval-voting committee election.

The central problem: choose a committee (binary m-vector) minimizing the
sum of the k largest Hamming distances to the n voter profiles.  The
package provides exact scoring, a combinatorial branch-and-bound with
preprocessing and chained bounds, the polynomial special cases (minisum,
cardinality-constrained minisum, bottom-h), separation oracles, MILP
formulation export, synthetic instance generation, and a CLI.
"""

from .bnb import Solution, SolveOptions, SolveStats, brute_force, solve_all_k, solve_ksum
from .bounds import BoundPair, Cut, FixedSet, chain_lower, chain_upper, preprocess_fix, separate
from .errors import InvalidArgumentError, KvoteError, ParseError, ResourceLimitError
from .gen_io import (
    GenConfig,
    ResultRecord,
    generate,
    read_instance,
    read_results_csv,
    write_instance,
    write_results_csv,
)
from .milp_export import FormulationKind, LinearModel, build, evaluate_at, write_lp
from .model import (
    Committee,
    DistanceReport,
    Instance,
    OwaWeights,
    approval_counts,
    hamming_distance,
    score,
    subset_counts,
    subset_distance,
)
from .polysolve import BottomHSolution, solve_bottom_h, solve_minisum, solve_minisum_card

__version__ = "0.1.0"

__all__ = [
    "Committee",
    "DistanceReport",
    "Instance",
    "OwaWeights",
    "approval_counts",
    "hamming_distance",
    "score",
    "subset_counts",
    "subset_distance",
    "GenConfig",
    "ResultRecord",
    "generate",
    "read_instance",
    "read_results_csv",
    "write_instance",
    "write_results_csv",
    "BottomHSolution",
    "solve_bottom_h",
    "solve_minisum",
    "solve_minisum_card",
    "BoundPair",
    "Cut",
    "FixedSet",
    "chain_lower",
    "chain_upper",
    "preprocess_fix",
    "separate",
    "Solution",
    "SolveOptions",
    "SolveStats",
    "brute_force",
    "solve_all_k",
    "solve_ksum",
    "FormulationKind",
    "LinearModel",
    "build",
    "evaluate_at",
    "write_lp",
    "KvoteError",
    "InvalidArgumentError",
    "ParseError",
    "ResourceLimitError",
]
