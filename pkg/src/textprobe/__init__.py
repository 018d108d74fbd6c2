"""Robustness testing for black-box text classifiers.

Generates natural adversarial test cases by substituting synonyms under
stop-word and change-rate constraints, searching the substitution space
with an adaptive best-first strategy, and reporting success rate, change
rate, perplexity, and query/time efficiency.
"""

from textprobe.errors import (
    BackendError,
    BudgetExhausted,
    ConfigError,
    DatasetParseError,
    EmbeddingParseError,
    EmptyCorpus,
    EmptyInput,
    LexiconParseError,
    ProtocolError,
    SimilarityUndefined,
    TextProbeError,
    UndefinedMetric,
)

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BudgetExhausted",
    "ConfigError",
    "DatasetParseError",
    "EmbeddingParseError",
    "EmptyCorpus",
    "EmptyInput",
    "LexiconParseError",
    "ProtocolError",
    "SimilarityUndefined",
    "TextProbeError",
    "UndefinedMetric",
    "__version__",
]
