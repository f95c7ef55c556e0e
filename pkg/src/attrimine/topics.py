"""LDA topic modeling with a collapsed Gibbs sampler.

The sampler is deliberately sequential and pure Python: determinism under a
fixed seed is part of the contract, and corpora here are small enough that
clarity beats vectorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import Comment


@dataclass(frozen=True)
class LdaConfig:
    """Hyperparameters for :func:`fit_lda`.

    Defaults are conventional Gibbs-LDA settings: K=5, alpha=50/K,
    beta=0.01, 1000 sweeps. ``burn_in`` is kept for sample-averaging
    extensions; point estimates are currently taken from the final sweep.
    """

    n_topics: int = 5
    alpha: float | None = None  # None -> 50 / n_topics
    beta: float = 0.01
    n_iterations: int = 1000
    burn_in: int = 200
    min_count: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n_topics < 1:
            raise ValueError(f"n_topics must be >= 1, got {self.n_topics}")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.n_iterations < 1:
            raise ValueError(f"n_iterations must be >= 1, got {self.n_iterations}")
        if not 0 <= self.burn_in < self.n_iterations:
            raise ValueError(f"burn_in must be in [0, n_iterations), got {self.burn_in}")

    @property
    def effective_alpha(self) -> float:
        return 50.0 / self.n_topics if self.alpha is None else self.alpha


@dataclass(frozen=True)
class TopicModel:
    """Point estimates from the final Gibbs sweep."""

    topic_word: np.ndarray  # K x V, rows sum to 1
    doc_topic: np.ndarray  # D x K, rows sum to 1
    vocabulary: tuple[str, ...]
    topic_proportions: np.ndarray  # length K, sums to 1

    @property
    def n_topics(self) -> int:
        return self.topic_word.shape[0]


class GibbsLda(BaseEstimator):
    """Collapsed Gibbs LDA over tokenized documents.

    Fit attributes: ``topic_word_``, ``doc_topic_``, ``vocabulary_``,
    ``topic_proportions_``. Identical input and ``random_state`` give
    bit-identical fits.
    """

    def __init__(self, n_topics=5, alpha=None, beta=0.01, n_iterations=1000,
                 burn_in=200, min_count=3, random_state=0):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.n_iterations = n_iterations
        self.burn_in = burn_in
        self.min_count = min_count
        self.random_state = random_state

    def fit(self, docs: Sequence[Sequence[str]], y=None):
        config = LdaConfig(
            n_topics=self.n_topics, alpha=self.alpha, beta=self.beta,
            n_iterations=self.n_iterations, burn_in=self.burn_in,
            min_count=self.min_count, seed=self.random_state,
        )
        counts: dict[str, int] = {}
        for doc in docs:
            for t in doc:
                counts[t] = counts.get(t, 0) + 1
        vocabulary = sorted(t for t, n in counts.items() if n >= config.min_count)
        if not vocabulary:
            raise ValueError("empty effective vocabulary after min_count filtering")
        index = {t: i for i, t in enumerate(vocabulary)}
        indexed = [[index[t] for t in doc if t in index] for doc in docs]

        K = config.n_topics
        V = len(vocabulary)
        alpha = config.effective_alpha
        beta = config.beta
        v_beta = V * beta
        rng = random.Random(config.seed)
        rand = rng.random

        n_dk = [[0] * K for _ in indexed]
        n_kv = [[0] * V for _ in range(K)]
        n_k = [0] * K
        assignments = []
        for d, doc in enumerate(indexed):
            z_doc = []
            row = n_dk[d]
            for v in doc:
                k = rng.randrange(K)
                z_doc.append(k)
                row[k] += 1
                n_kv[k][v] += 1
                n_k[k] += 1
            assignments.append(z_doc)

        topics = range(K)
        for _ in range(config.n_iterations):
            for d, doc in enumerate(indexed):
                row = n_dk[d]
                z_doc = assignments[d]
                for i, v in enumerate(doc):
                    k = z_doc[i]
                    row[k] -= 1
                    n_kv[k][v] -= 1
                    n_k[k] -= 1
                    # full conditional up to a constant; sample by inverse cdf
                    total = 0.0
                    cumulative = []
                    for kk in topics:
                        total += (n_kv[kk][v] + beta) / (n_k[kk] + v_beta) * (row[kk] + alpha)
                        cumulative.append(total)
                    r = rand() * total
                    k = 0
                    while cumulative[k] < r:
                        k += 1
                    z_doc[i] = k
                    row[k] += 1
                    n_kv[k][v] += 1
                    n_k[k] += 1

        n_kv_arr = np.array(n_kv, dtype=np.float64)
        n_dk_arr = np.array(n_dk, dtype=np.float64)
        n_k_arr = np.array(n_k, dtype=np.float64)
        self.topic_word_ = (n_kv_arr + beta) / (n_k_arr[:, None] + v_beta)
        self.doc_topic_ = (n_dk_arr + alpha) / (n_dk_arr.sum(axis=1, keepdims=True) + K * alpha)
        self.vocabulary_ = tuple(vocabulary)
        total_tokens = n_k_arr.sum()
        self.topic_proportions_ = (
            n_k_arr / total_tokens if total_tokens > 0 else np.full(K, 1.0 / K)
        )
        return self


def fit_lda(
    comments: Sequence[Comment],
    config: LdaConfig | None = None,
    stopwords: frozenset[str] = frozenset(),
) -> TopicModel:
    """Fit LDA over comments (one document per comment, stopwords removed)."""
    config = config or LdaConfig()
    docs = [
        [t for s in c.sentences for t in s.tokens if t not in stopwords]
        for c in comments
    ]
    if not any(docs):
        raise ValueError("corpus is empty after stopword removal")
    lda = GibbsLda(
        n_topics=config.n_topics, alpha=config.alpha, beta=config.beta,
        n_iterations=config.n_iterations, burn_in=config.burn_in,
        min_count=config.min_count, random_state=config.seed,
    ).fit(docs)
    return TopicModel(
        topic_word=lda.topic_word_,
        doc_topic=lda.doc_topic_,
        vocabulary=lda.vocabulary_,
        topic_proportions=lda.topic_proportions_,
    )


def top_tokens(model: TopicModel, k: int, n: int) -> list[str]:
    """The n highest-probability tokens of topic k, ties alphabetical."""
    if not 0 <= k < model.n_topics:
        raise ValueError(f"topic index {k} out of range for {model.n_topics} topics")
    order = sorted(range(len(model.vocabulary)), key=lambda i: (-model.topic_word[k, i], model.vocabulary[i]))
    return [model.vocabulary[i] for i in order[:n]]


def topic_proportions(model: TopicModel) -> np.ndarray:
    """Share of corpus tokens assigned to each topic at the final sweep."""
    return model.topic_proportions
