"""Generalized Mastermind MM(c, p): combinatorics, solvers and benchmarks."""
from .core import (
    Code,
    ContradictoryHistoryError,
    Feedback,
    GameConfig,
    InvalidInputError,
    MastermindError,
    PartitionTable,
    ResourceLimitError,
    cardinality_by_colors,
    consistent_set,
    enumerate_codes,
    feedback,
    format_code,
    hamming_neighbors,
    legal_feedback_classes,
    parse_code,
    partition_sizes,
)
from .harness import GameRecord, SummaryStats, export_records, play_game, run_batch, summarize
from .solvers import (
    SolverParams,
    SolverState,
    StrategyTreeResult,
    default_initial_guess,
    knuth_next,
    merc_expected_size,
    merc_next,
    optimal_worst_case,
    random_next,
    sa_acceptance_probability,
    sa_next,
    sa_score,
)

__version__ = "0.1.0"
