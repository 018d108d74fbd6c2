"""Classifier verdicts: a label plus one confidence value per label."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

_SUM_TOLERANCE = 1e-6


def argmax_label(confidence: Mapping[str, float]) -> str:
    """Highest-confidence label; ties resolve to the lexicographically smallest."""
    return min(confidence, key=lambda label: (-confidence[label], label))


@dataclass(frozen=True)
class ThreatVerdict:
    """One black-box classification result.

    Confidences must sum to one (within 1e-6) and the label must be the
    argmax of the map, ties broken lexicographically.
    """

    label: str
    confidence: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.confidence:
            raise ValueError("verdict needs at least one labelled confidence")
        total = 0.0
        for label, value in self.confidence.items():
            if not -1e-9 <= value <= 1.0 + 1e-9:
                raise ValueError(f"confidence for {label!r} out of range: {value}")
            total += value
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"confidences sum to {total}, expected 1")
        expected = argmax_label(self.confidence)
        if self.label != expected:
            raise ValueError(
                f"label {self.label!r} is not the argmax ({expected!r})"
            )

    def score(self, label: str) -> float:
        """Confidence assigned to ``label`` (0 when the label is unknown)."""
        return float(self.confidence.get(label, 0.0))

    @staticmethod
    def from_confidences(confidence: Mapping[str, float]) -> "ThreatVerdict":
        return ThreatVerdict(argmax_label(confidence), dict(confidence))

    @staticmethod
    def from_top_label(
        label: str, confidence: float, label_set: tuple[str, ...]
    ) -> "ThreatVerdict":
        """Complete a single (label, confidence) reply into a full map.

        The remaining mass is spread uniformly over the other labels.
        """
        others = [l for l in label_set if l != label]
        if not others:
            return ThreatVerdict(label, {label: 1.0})
        rest = (1.0 - confidence) / len(others)
        full = {l: rest for l in others}
        full[label] = confidence
        return ThreatVerdict.from_confidences(full)
