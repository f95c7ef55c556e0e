"""Comment-factor similarity scoring and relevance pruning.

A comment survives pruning only if it both ranks inside the top percentile
of comments for at least one factor and clears the absolute similarity
threshold with its best factor.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Comment, CorpusStats
from .embeddings import EmbeddingStore, cosine, sentence_embedding
from .factors import Factor, FactorCatalog, factor_embedding


@dataclass(frozen=True)
class SimilarityRecord:
    """Per-factor similarity scores for one comment."""

    comment_id: str
    scores: dict[str, float]
    max_score: float
    argmax_factor: str

    @classmethod
    def from_scores(cls, comment_id: str, scores: Mapping[str, float]) -> "SimilarityRecord":
        best = max(scores.values())
        # ties broken by lexicographic factor id
        argmax = min(fid for fid, s in scores.items() if s == best)
        return cls(comment_id=comment_id, scores=dict(scores), max_score=best, argmax_factor=argmax)


def comment_factor_sim(
    comment: Comment,
    factor: Factor,
    store: EmbeddingStore,
    stats: CorpusStats,
) -> float:
    """Best sentence-level cosine between the comment and the factor.

    Degenerate sentence embeddings contribute 0 rather than erroring out.
    """
    if not comment.sentences:
        raise ValueError(f"comment {comment.id!r} has no sentences")
    target = factor_embedding(factor, store)
    return max(
        cosine(sentence_embedding(s.tokens, store, stats).vector, target)
        for s in comment.sentences
    )


def _score_all(
    comments: Sequence[Comment],
    catalog: FactorCatalog,
    store: EmbeddingStore,
    stats: CorpusStats,
) -> tuple[list[SimilarityRecord], list[str]]:
    embeddable: dict[str, np.ndarray] = {}
    for fid in catalog.factor_ids:
        try:
            embeddable[fid] = factor_embedding(catalog.factors[fid], store)
        except ValueError:
            continue  # fully out-of-vocabulary factors cannot attract comments
    if not embeddable:
        raise ValueError("no catalog factor has an in-vocabulary phrase token")
    records = []
    for comment in comments:
        sentence_vectors = [sentence_embedding(s.tokens, store, stats).vector for s in comment.sentences]
        scores = {}
        for fid, target in embeddable.items():
            scores[fid] = max((cosine(v, target) for v in sentence_vectors), default=0.0)
        records.append(SimilarityRecord.from_scores(comment.id, scores))
    return records, sorted(embeddable)


def prune(
    comments: Sequence[Comment],
    catalog: FactorCatalog,
    store: EmbeddingStore,
    stats: CorpusStats,
    percentile: float = 0.20,
    threshold: float = 0.7,
) -> tuple[list[Comment], list[SimilarityRecord]]:
    """Filter to comments likely to be on topic.

    Keeps a comment iff (a) it ranks within the top ``ceil(percentile * n)``
    comments by similarity for at least one factor, with boundary ties kept,
    and (b) its best factor similarity is >= ``threshold``. Similarity
    records are returned for every input comment, kept or not.
    """
    if not 0.0 < percentile <= 1.0:
        raise ValueError(f"percentile must be in (0, 1], got {percentile}")
    if not comments:
        return [], []
    records, factor_ids = _score_all(comments, catalog, store, stats)
    cutoff_rank = math.ceil(percentile * len(comments))
    top_ranked: set[str] = set()
    for fid in factor_ids:
        ranked = sorted((r.scores[fid] for r in records), reverse=True)
        cutoff_score = ranked[cutoff_rank - 1]
        top_ranked.update(r.comment_id for r in records if r.scores[fid] >= cutoff_score)
    by_id = {r.comment_id: r for r in records}
    kept = [
        c for c in comments
        if c.id in top_ranked and by_id[c.id].max_score >= threshold
    ]
    return kept, records


def token_frequency_export(
    comments: Sequence[Comment],
    stopwords: frozenset[str] = frozenset(),
) -> dict[str, int]:
    """Total token occurrence counts across all sentences, stopwords excluded."""
    counts: Counter[str] = Counter()
    for comment in comments:
        for sentence in comment.sentences:
            counts.update(t for t in sentence.tokens if t not in stopwords)
    return dict(counts)
