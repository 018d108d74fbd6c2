"""Exception hierarchy shared across the package."""


class TextProbeError(Exception):
    """Base class for all package-specific errors."""


class EmptyInput(TextProbeError):
    """Raised when a zero-length text is handed to the tokenizer."""


class LexiconParseError(TextProbeError):
    """A lexical database file is missing or malformed; message names file and line."""


class EmbeddingParseError(TextProbeError):
    """An embedding file row contradicts the established vector dimension."""


class SimilarityUndefined(TextProbeError):
    """Cosine similarity requested against a zero vector."""


class BudgetExhausted(TextProbeError):
    """A cache-missing classifier call would exceed the query budget."""


class BackendError(TextProbeError):
    """A classifier backend kept failing after all retries; carries the raw body."""

    def __init__(self, message: str, raw_body: str | None = None):
        super().__init__(message)
        self.raw_body = raw_body


class ProtocolError(TextProbeError):
    """A classifier backend answered with semantically invalid content."""


class DatasetParseError(TextProbeError):
    """A dataset row is unreadable; message names file and line."""


class ConfigError(TextProbeError):
    """A configuration value violates its contract."""


class EmptyCorpus(TextProbeError):
    """Language-model training was attempted on an empty corpus."""


class UndefinedMetric(TextProbeError):
    """A ratio metric was requested over an empty denominator."""
