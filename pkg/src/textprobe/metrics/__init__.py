"""Evaluation indicators: success/change rates, perplexity, efficiency, transfer."""

from textprobe.metrics.ngram import NGramModel, perplexity, train_ngram
from textprobe.metrics.stats import (
    CampaignStats,
    change_rate,
    compute_stats,
    efficiency_stats,
    mean_stats,
    success_rate,
    transfer_evaluate,
)

__all__ = [
    "CampaignStats",
    "NGramModel",
    "change_rate",
    "compute_stats",
    "efficiency_stats",
    "mean_stats",
    "perplexity",
    "success_rate",
    "train_ngram",
    "transfer_evaluate",
]
