"""Deletion-based word importance scores with an adaptive history term.

The raw score of a position measures how much removing its token moves
the classifier away from the ground-truth label; positions whose deletion
flips the predicted label get credited with the cross-label terms as
well. On top of that, each search keeps a short per-position history of
observed ground-truth confidence drops and shifts the raw score by the
mean of the most recent records, so consistently productive positions
rise in the perturbation order even when a single probe is noisy.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from textprobe.lexicon.tokenizer import TokenizedInput
from textprobe.search.nodes import SearchNode
from textprobe.threat.budget import ThreatModel

SKIP = -math.inf


def _probe_positions(inp: TokenizedInput) -> list[int]:
    return [
        i
        for i, tok in enumerate(inp.tokens)
        if not (tok.is_stopword or tok.is_frozen)
    ]


def wir_scores(
    inp: TokenizedInput,
    node: SearchNode,
    threat: ThreatModel,
    y: str,
) -> list[float]:
    """Score every position of ``node``; skipped positions get -inf.

    One deletion probe is issued per perturbable position (cache hits are
    free). A budget failure propagates and partial scores are discarded.
    """
    base = threat.classify(node.text)
    scores = [SKIP] * len(inp.tokens)
    for i in _probe_positions(inp):
        probe = threat.classify(inp.render_without(node.surfaces, i))
        if probe.label == y:
            scores[i] = base.score(y) - probe.score(y)
        else:
            flipped = probe.label
            scores[i] = (
                base.score(y)
                + probe.score(flipped)
                - probe.score(y)
                - base.score(flipped)
            )
    return scores


def ground_truth_deltas(
    inp: TokenizedInput,
    node: SearchNode,
    threat: ThreatModel,
    y: str,
) -> list[float | None]:
    """Confidence drop on the ground-truth label per deletion probe.

    Run after :func:`wir_scores` this costs nothing: every probe text is
    already cached.
    """
    base = threat.classify(node.text)
    deltas: list[float | None] = [None] * len(inp.tokens)
    for i in _probe_positions(inp):
        probe = threat.classify(inp.render_without(node.surfaces, i))
        deltas[i] = base.score(y) - probe.score(y)
    return deltas


@dataclass
class WirState:
    """Per-position ring buffers of recent score drops, scoped to one search."""

    k2: int = 5
    alpha: tuple[float, ...] = ()
    history: dict[int, deque] = field(default_factory=dict)

    def __post_init__(self):
        if self.k2 < 1:
            raise ValueError("k2 must be at least 1")
        if self.alpha and len(self.alpha) != self.k2:
            raise ValueError("alpha must be empty (uniform) or of length k2")


def record_delta(state: WirState, position: int, delta: float) -> None:
    """Append a score drop, evicting the oldest record beyond the window."""
    buf = state.history.get(position)
    if buf is None:
        buf = deque(maxlen=state.k2)
        state.history[position] = buf
    buf.append(delta)


def adaptive_adjust(scores: list[float], state: WirState) -> list[float]:
    """Shift each score by the weighted mean of its recent history.

    With m available records (m <= k2) the mean runs over exactly those m,
    weights aligned most-recent-first. Positions with no history and
    skipped positions are returned unchanged.
    """
    adjusted = list(scores)
    for position, buf in state.history.items():
        if not buf or position >= len(adjusted) or adjusted[position] == SKIP:
            continue
        recent = list(buf)[::-1]  # newest first
        weights = state.alpha if state.alpha else (1.0,) * len(recent)
        m = len(recent)
        adjusted[position] += sum(w * d for w, d in zip(weights, recent)) / m
    return adjusted
