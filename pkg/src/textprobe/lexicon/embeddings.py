"""Plain-text word embedding loader and cosine similarity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from textprobe.errors import EmbeddingParseError, SimilarityUndefined


@dataclass
class EmbeddingTable:
    """Word vectors of a single dimension, loaded once and then read-only."""

    dim: int
    vectors: dict[str, np.ndarray]
    malformed_rows: int = 0
    _matrix: np.ndarray | None = field(default=None, repr=False)
    _words: list[str] = field(default_factory=list, repr=False)

    def __contains__(self, word: str) -> bool:
        return self.get(word) is not None

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str) -> np.ndarray | None:
        vec = self.vectors.get(word)
        if vec is None:
            vec = self.vectors.get(word.lower())
        return vec

    def _ensure_matrix(self):
        if self._matrix is None:
            self._words = list(self.vectors)
            mat = np.stack([self.vectors[w] for w in self._words]) if self._words else np.zeros((0, self.dim))
            norms = np.linalg.norm(mat, axis=1)
            zero = norms == 0
            norms[zero] = 1.0
            normalized = mat / norms[:, None]
            normalized[zero] = np.nan  # zero vectors never rank
            self._matrix = normalized

    def nearest(self, word: str, k: int, exclude: Sequence[str] = ()) -> list[str]:
        """The ``k`` vocabulary words most cosine-similar to ``word``.

        Ties are broken alphabetically; words in ``exclude`` and words
        without a usable (non-zero) vector are skipped.
        """
        query = self.get(word)
        if query is None:
            return []
        qnorm = float(np.linalg.norm(query))
        if qnorm == 0:
            return []
        self._ensure_matrix()
        sims = self._matrix @ (query / qnorm)
        excluded = {w.lower() for w in exclude} | {word.lower()}
        ranked = sorted(
            (
                (-float(sim), w)
                for w, sim in zip(self._words, sims)
                if w.lower() not in excluded and math.isfinite(sim)
            ),
        )
        return [w for _, w in ranked[:k]]


def cosine(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; zero vectors are rejected."""
    va = np.asarray(a, dtype=float)
    vb = np.asarray(b, dtype=float)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise SimilarityUndefined("cosine against a zero vector")
    return float(np.dot(va, vb) / (na * nb))


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Parse ``word f1 ... fd`` rows; the first row fixes the dimension.

    A row with the wrong number of columns raises
    :class:`EmbeddingParseError`; rows with unparseable or non-finite
    values are skipped and counted in ``malformed_rows``.
    """
    path = Path(path)
    dim: int | None = None
    vectors: dict[str, np.ndarray] = {}
    malformed = 0
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if dim is None:
                if len(parts) < 2:
                    raise EmbeddingParseError(
                        f"{path}:{lineno}: first row needs a word and at least one value"
                    )
                dim = len(parts) - 1
            if len(parts) - 1 != dim:
                raise EmbeddingParseError(
                    f"{path}:{lineno}: expected {dim} values, found {len(parts) - 1}"
                )
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=float)
            except ValueError:
                malformed += 1
                continue
            if not np.all(np.isfinite(vec)):
                malformed += 1
                continue
            vectors[parts[0]] = vec
    if dim is None:
        raise EmbeddingParseError(f"{path}: no rows")
    return EmbeddingTable(dim=dim, vectors=vectors, malformed_rows=malformed)
