"""Per-position substitution candidates: the edges of the search graph.

Four providers are supported. ``wordnet`` draws synonym groups from a
:class:`SynsetLexicon` and, when an embedding table is available, keeps
the candidates most cosine-similar to the original word. ``embedding``
takes nearest neighbors in the embedding space directly. ``random_word``
and ``random_char`` build seeded random insert/delete/replace candidates
and exist as weak baselines.
"""

from __future__ import annotations

import random
import re
import string
from dataclasses import dataclass

from textprobe.errors import ConfigError, SimilarityUndefined
from textprobe.lexicon.embeddings import EmbeddingTable, cosine
from textprobe.lexicon.stopwords import ENGLISH_STOPWORDS
from textprobe.lexicon.tokenizer import TokenizedInput
from textprobe.lexicon.wordnet import SynsetLexicon

PROVIDERS = ("wordnet", "embedding", "random_word", "random_char")

_SINGLE_WORD_RE = re.compile(r"^\w+$", re.UNICODE)


@dataclass(frozen=True)
class LexiconConfig:
    """Knobs for building substitution candidates."""

    k1: int = 25
    wordnet_dir: str | None = None
    embeddings_path: str | None = None
    stopword_list: frozenset[str] = ENGLISH_STOPWORDS
    freeze_prompt: bool = True

    def __post_init__(self):
        if self.k1 < 1:
            raise ConfigError("k1 must be at least 1")


@dataclass(frozen=True)
class TransformSpace:
    """One candidate list per token position."""

    per_position: tuple[tuple[str, ...], ...]
    provider: str = "wordnet"

    def __len__(self) -> int:
        return len(self.per_position)


def _wordnet_candidates(
    surface: str,
    pos: str,
    lexicon: SynsetLexicon,
    embeddings: EmbeddingTable | None,
    k1: int,
) -> list[str]:
    lemma = surface.lower()
    raw = [
        w
        for w in lexicon.synonyms(lemma, pos)
        if "_" not in w and w != lemma
    ]
    if embeddings is None:
        return raw[:k1]
    origin = embeddings.get(surface)
    if origin is None:
        return raw[:k1]
    ranked: list[tuple[float, int, str]] = []
    unranked: list[str] = []
    for order, cand in enumerate(raw):
        vec = embeddings.get(cand)
        if vec is None:
            unranked.append(cand)
            continue
        try:
            sim = cosine(origin, vec)
        except SimilarityUndefined:
            unranked.append(cand)
            continue
        ranked.append((-sim, order, cand))
    ranked.sort()
    ordered = [cand for _, _, cand in ranked] + unranked
    return ordered[:k1]


def _embedding_candidates(
    surface: str, embeddings: EmbeddingTable, k1: int
) -> list[str]:
    neighbors = embeddings.nearest(surface, k1 * 2, exclude=(surface,))
    kept = [
        w for w in neighbors if _SINGLE_WORD_RE.match(w) and "_" not in w
    ]
    return kept[:k1]


def _random_word_candidates(
    surface: str, vocab: list[str], k1: int, rng: random.Random
) -> list[str]:
    if not vocab:
        return []
    out: dict[str, None] = {}
    attempts = 0
    while len(out) < k1 and attempts < k1 * 4:
        attempts += 1
        op = attempts % 3
        pick = vocab[rng.randrange(len(vocab))]
        if op == 0:
            cand = pick  # replacement
        elif op == 1:
            cand = ""  # deletion
        else:
            cand = f"{surface} {pick}"  # insertion after the original
        if cand.lower() != surface.lower():
            out.setdefault(cand)
    return list(out)[:k1]


def _random_char_candidates(surface: str, k1: int, rng: random.Random) -> list[str]:
    letters = string.ascii_lowercase
    out: dict[str, None] = {}
    attempts = 0
    while len(out) < k1 and attempts < k1 * 6:
        attempts += 1
        op = attempts % 3
        if op == 0:  # insertion
            idx = rng.randrange(len(surface) + 1)
            cand = surface[:idx] + rng.choice(letters) + surface[idx:]
        elif op == 1:  # deletion
            if len(surface) < 2:
                continue
            idx = rng.randrange(len(surface))
            cand = surface[:idx] + surface[idx + 1:]
        else:  # replacement
            idx = rng.randrange(len(surface))
            cand = surface[:idx] + rng.choice(letters) + surface[idx + 1:]
        if cand.lower() != surface.lower():
            out.setdefault(cand)
    return list(out)[:k1]


def build_transform_space(
    inp: TokenizedInput,
    lexicon: SynsetLexicon | None = None,
    embeddings: EmbeddingTable | None = None,
    cfg: LexiconConfig | None = None,
    provider: str = "wordnet",
    seed: int | str = 0,
) -> TransformSpace:
    """Build candidate substitution lists for every token position.

    Stop-word and frozen positions always get empty lists, no list exceeds
    ``k1`` entries, and the original surface never appears among its own
    candidates. The random providers are deterministic for a fixed seed;
    the lexical providers do not consume the seed at all.
    """
    cfg = cfg or LexiconConfig()
    if provider not in PROVIDERS:
        raise ConfigError(f"unknown provider {provider!r}")
    if provider == "wordnet" and lexicon is None:
        raise ConfigError("wordnet provider requires a lexicon")
    if provider == "embedding" and embeddings is None:
        raise ConfigError("embedding provider requires an embedding table")
    vocab: list[str] = []
    if provider == "random_word":
        if lexicon is None:
            raise ConfigError("random_word provider draws from the lexicon vocabulary")
        vocab = [w for w in lexicon.lemmas() if "_" not in w]
    lists = []
    for position, token in enumerate(inp.tokens):
        if token.is_stopword or token.is_frozen:
            lists.append(())
            continue
        if provider == "wordnet":
            cands = _wordnet_candidates(
                token.surface, token.pos, lexicon, embeddings, cfg.k1
            )
        elif provider == "embedding":
            cands = _embedding_candidates(token.surface, embeddings, cfg.k1)
        else:
            rng = random.Random(f"{seed}:{position}:{token.surface}")
            if provider == "random_word":
                cands = _random_word_candidates(token.surface, vocab, cfg.k1, rng)
            else:
                cands = _random_char_candidates(token.surface, cfg.k1, rng)
        cands = [c for c in cands if c.lower() != token.surface.lower()]
        lists.append(tuple(cands[:cfg.k1]))
    return TransformSpace(per_position=tuple(lists), provider=provider)
