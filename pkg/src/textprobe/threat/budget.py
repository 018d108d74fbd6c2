"""Query budget accounting and response caching around any classifier."""

from __future__ import annotations

import hashlib
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from textprobe.errors import BudgetExhausted, ConfigError
from textprobe.threat.verdict import ThreatVerdict


class ThreatModel(ABC):
    """The black-box classifier under test."""

    label_set: tuple[str, ...] = ()

    @abstractmethod
    def classify(self, text: str) -> ThreatVerdict:
        """Return a verdict for ``text``."""


def _key(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class QueryLedger:
    """Counts backend queries and remembers every verdict already paid for.

    ``used`` counts cache misses only and can never exceed ``max_query``.
    """

    max_query: int
    used: int = 0
    cache: dict[str, ThreatVerdict] = field(default_factory=dict)
    cache_hits: int = 0

    def __post_init__(self):
        if self.max_query < 1:
            raise ConfigError("max_query must be positive")

    @property
    def remaining(self) -> int:
        return self.max_query - self.used


class CachingThreatModel(ThreatModel):
    """Budgeted, caching front for a backend classifier.

    Identical input text never reaches the backend twice, and the
    overflow check happens before (never after) the overflowing call.
    Ledger updates are serialized so the adapter can be shared.
    """

    def __init__(self, backend: ThreatModel, max_query: int = 3000):
        self.backend = backend
        self.label_set = getattr(backend, "label_set", ())
        self.ledger = QueryLedger(max_query=max_query)
        self._lock = threading.Lock()

    @property
    def remaining(self) -> int:
        return self.ledger.remaining

    def classify(self, text: str) -> ThreatVerdict:
        key = _key(text)
        with self._lock:
            hit = self.ledger.cache.get(key)
            if hit is not None:
                self.ledger.cache_hits += 1
                return hit
            if self.ledger.used + 1 > self.ledger.max_query:
                raise BudgetExhausted(
                    f"query budget of {self.ledger.max_query} exhausted"
                )
            verdict = self.backend.classify(text)
            self.ledger.used += 1
            self.ledger.cache[key] = verdict
            return verdict
