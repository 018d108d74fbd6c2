"""Add-k smoothed n-gram language model used for perplexity scoring.

Any object exposing ``perplexity(text) -> float`` can serve as the
fluency scorer in a campaign; this module provides the built-in model.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from textprobe.errors import EmptyCorpus
from textprobe.lexicon.tokenizer import word_tokens

START = "<s>"
UNK = "<unk>"


@dataclass
class NGramModel:
    """Conditional token model with start padding and unknown-word mapping.

    For every context the smoothed probabilities over vocab + UNK sum to
    one. With smoothing 0 an unseen event has probability zero and
    perplexity degenerates to the infinity sentinel.
    """

    order: int
    smoothing: float = 1.0
    counts: dict[tuple, Counter] = field(default_factory=dict)
    context_totals: dict[tuple, int] = field(default_factory=dict)
    vocab: frozenset = frozenset()

    def _map(self, token: str) -> str:
        return token if token in self.vocab or token == START else UNK

    def prob(self, context: Sequence[str], token: str) -> float:
        """P(token | last order-1 context tokens) with add-k smoothing."""
        ctx = tuple(self._map(t) for t in context)[max(0, len(context) - self.order + 1):]
        tok = self._map(token)
        k = self.smoothing
        options = len(self.vocab) + 1  # vocabulary plus UNK
        seen = self.counts.get(ctx, None)
        hits = seen[tok] if seen else 0
        total = self.context_totals.get(ctx, 0)
        denom = total + k * options
        if denom == 0:
            return 0.0
        return (hits + k) / denom

    def perplexity(self, text: str) -> float:
        """exp of the mean negative log-likelihood of the text's tokens.

        Returns the ``inf`` sentinel as soon as any token has zero
        probability (possible only with smoothing 0); an empty text
        scores the lower bound 1.0.
        """
        tokens = word_tokens(text)
        if not tokens:
            return 1.0
        history = [START] * (self.order - 1)
        log_total = 0.0
        for token in tokens:
            p = self.prob(tuple(history), token)
            if p <= 0.0:
                return math.inf
            log_total += math.log(p)
            history.append(token)
        return math.exp(-log_total / len(tokens))


def train_ngram(
    corpus: Iterable[Sequence[str]], order: int = 3, smoothing: float = 1.0
) -> NGramModel:
    """Count n-grams over pre-tokenized sequences."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if smoothing < 0:
        raise ValueError("smoothing must be non-negative")
    counts: dict[tuple, Counter] = {}
    totals: dict[tuple, int] = {}
    vocab = set()
    seen_any = False
    for sequence in corpus:
        tokens = list(sequence)
        if not tokens:
            continue
        seen_any = True
        vocab.update(tokens)
        padded = [START] * (order - 1) + tokens
        for i in range(order - 1, len(padded)):
            ctx = tuple(padded[i - order + 1:i])
            tok = padded[i]
            counts.setdefault(ctx, Counter())[tok] += 1
            totals[ctx] = totals.get(ctx, 0) + 1
    if not seen_any:
        raise EmptyCorpus("no training sequences")
    return NGramModel(
        order=order,
        smoothing=smoothing,
        counts=counts,
        context_totals=totals,
        vocab=frozenset(vocab),
    )


def perplexity(model: NGramModel, text: str) -> float:
    return model.perplexity(text)
