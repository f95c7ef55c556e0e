"""Static word vectors, tf-idf weighted sentence embeddings, and cosine.

The geometric substrate shared by corpus pruning and the untrained
similarity baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import CorpusStats


@dataclass
class EmbeddingStore:
    """Token -> fixed-dimension vector map plus a stopword set.

    Lookups of unknown tokens return None; there is deliberately no
    default vector.
    """

    dim: int
    vectors: dict[str, np.ndarray]
    stopwords: frozenset[str]

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class SentenceEmbedding:
    vector: np.ndarray
    n_contributing_tokens: int

    @property
    def degenerate(self) -> bool:
        """True when every token was a stopword or out of vocabulary."""
        return self.n_contributing_tokens == 0


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line, lowercased on load."""
    return frozenset(
        line.strip().lower() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()
    )


def load_vectors(path: str | Path, stopword_path: str | Path | None = None) -> EmbeddingStore:
    """Parse a ``token v1 .. vD`` text vector file.

    The dimension is inferred from the first line. A later duplicate token
    overwrites an earlier one. Ragged lines and unparseable floats raise,
    naming the offending line (and column).
    """
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            fields = line.split()
            if not fields:
                continue
            if dim is None:
                dim = len(fields) - 1
                if dim < 1:
                    raise ValueError(f"line {lineno}: no vector components")
            if len(fields) != dim + 1:
                raise ValueError(f"line {lineno}: expected {dim + 1} fields, got {len(fields)}")
            values = np.empty(dim, dtype=np.float64)
            for col, raw in enumerate(fields[1:], start=2):
                try:
                    values[col - 2] = float(raw)
                except ValueError:
                    raise ValueError(f"line {lineno}, column {col}: cannot parse float {raw!r}") from None
            vectors[fields[0]] = values
    if dim is None:
        raise ValueError("vector file is empty")
    stopwords = load_stopwords(stopword_path) if stopword_path is not None else frozenset()
    return EmbeddingStore(dim=dim, vectors=vectors, stopwords=stopwords)


def idf(stats: CorpusStats, token: str) -> float:
    """Smoothed inverse document frequency: ln((1+N)/(1+df)) + 1.

    Strictly positive, defined even for unseen tokens (df = 0), and
    non-increasing in df for fixed N.
    """
    df = stats.document_frequency.get(token, 0)
    return math.log((1.0 + stats.n_sentences) / (1.0 + df)) + 1.0


def sentence_embedding(
    tokens: Sequence[str],
    store: EmbeddingStore,
    stats: CorpusStats,
) -> SentenceEmbedding:
    """tf-idf weighted mean of in-vocabulary, non-stopword token vectors.

    tf is the raw within-sentence count. A sentence with nothing left
    after filtering yields the flagged degenerate zero embedding.
    """
    kept = [t for t in tokens if t not in store.stopwords and t in store]
    if not kept:
        return SentenceEmbedding(vector=np.zeros(store.dim), n_contributing_tokens=0)
    weighted = np.zeros(store.dim)
    total_weight = 0.0
    counts: dict[str, int] = {}
    for t in kept:
        counts[t] = counts.get(t, 0) + 1
    for t, tf in counts.items():
        w = tf * idf(stats, t)
        weighted += w * store.vectors[t]
        total_weight += w
    return SentenceEmbedding(vector=weighted / total_weight, n_contributing_tokens=len(kept))


def cosine(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; 0 when either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))
