"""Deterministic bag-of-words surrogate classifier for desk-scale testing.

Scores are linear in token counts and turned into confidences with a
temperature softmax, so every verdict is reproducible and cheap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from textprobe.errors import ConfigError
from textprobe.lexicon.tokenizer import word_tokens
from textprobe.threat.budget import ThreatModel
from textprobe.threat.verdict import ThreatVerdict, argmax_label


@dataclass(frozen=True)
class SurrogateSpec:
    """Weights of a linear bag-of-words scorer."""

    label_set: tuple[str, ...]
    weights: Mapping[tuple[str, str], float] = field(default_factory=dict)
    bias: Mapping[str, float] = field(default_factory=dict)
    temperature: float = 1.0

    def __post_init__(self):
        if not self.label_set:
            raise ConfigError("surrogate needs a non-empty label set")
        if self.temperature <= 0:
            raise ConfigError("temperature must be positive")

    def to_dict(self) -> dict:
        nested: dict[str, dict[str, float]] = {}
        for (word, label), value in self.weights.items():
            nested.setdefault(word, {})[label] = value
        return {
            "labels": list(self.label_set),
            "weights": nested,
            "bias": dict(self.bias),
            "temperature": self.temperature,
        }

    @staticmethod
    def from_dict(data: Mapping) -> "SurrogateSpec":
        weights = {
            (word, label): float(value)
            for word, per_label in data.get("weights", {}).items()
            for label, value in per_label.items()
        }
        return SurrogateSpec(
            label_set=tuple(data["labels"]),
            weights=weights,
            bias={k: float(v) for k, v in data.get("bias", {}).items()},
            temperature=float(data.get("temperature", 1.0)),
        )


def load_surrogate(path: str | Path) -> SurrogateSpec:
    with open(path, encoding="utf-8") as handle:
        return SurrogateSpec.from_dict(json.load(handle))


def surrogate_classify(spec: SurrogateSpec, text: str) -> ThreatVerdict:
    """score(l) = bias(l) + sum of token weights; softmax(score/temperature)."""
    tokens = word_tokens(text)
    scores = {}
    for label in spec.label_set:
        total = spec.bias.get(label, 0.0)
        for token in tokens:
            total += spec.weights.get((token, label), 0.0)
        scores[label] = total / spec.temperature
    peak = max(scores.values())
    exps = {label: math.exp(s - peak) for label, s in scores.items()}
    norm = sum(exps.values())
    confidence = {label: value / norm for label, value in exps.items()}
    return ThreatVerdict(argmax_label(confidence), confidence)


class SurrogateThreatModel(ThreatModel):
    """Adapter wrapping a :class:`SurrogateSpec`; classification is pure."""

    def __init__(self, spec: SurrogateSpec):
        self.spec = spec
        self.label_set = spec.label_set

    def classify(self, text: str) -> ThreatVerdict:
        return surrogate_classify(self.spec, text)
