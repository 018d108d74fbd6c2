"""Adaptive best-first and greedy searches over the substitution space."""

from textprobe.search.nodes import Edit, NodeQueue, SearchNode
from textprobe.search.strategies import (
    BUDGET_EXHAUSTED,
    QUEUE_EMPTY,
    SKIPPED,
    STRATEGIES,
    SUCCESS,
    SearchConfig,
    SearchOutcome,
    abfs_search,
    constraint_check,
    expand,
    greedy_search,
    run_search,
)
from textprobe.search.wir import (
    SKIP,
    WirState,
    adaptive_adjust,
    ground_truth_deltas,
    record_delta,
    wir_scores,
)

__all__ = [
    "BUDGET_EXHAUSTED",
    "Edit",
    "NodeQueue",
    "QUEUE_EMPTY",
    "SKIP",
    "SKIPPED",
    "STRATEGIES",
    "SUCCESS",
    "SearchConfig",
    "SearchNode",
    "SearchOutcome",
    "WirState",
    "abfs_search",
    "adaptive_adjust",
    "constraint_check",
    "expand",
    "greedy_search",
    "ground_truth_deltas",
    "record_delta",
    "run_search",
    "wir_scores",
]
