"""Synthetic-data builders shared across test modules."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from attrimine.attribution import (
    StaticVectorSource,
    TrainingConfig,
    build_pairs,
    factor_representations,
    max_factor_score,
    predict,
    split_keys,
    train,
    tune_detection_threshold,
)
from attrimine.corpus import Comment
from attrimine.embeddings import EmbeddingStore
from attrimine.factors import BroadCategory, Factor, FactorCatalog


def toy_catalog(n_categories: int) -> FactorCatalog:
    factors = {
        f"cause{k}": Factor(id=f"cause{k}", phrase=(f"cause{k}",), category=f"cat{k}")
        for k in range(n_categories)
    }
    categories = {
        f"cat{k}": BroadCategory(id=f"cat{k}", display_name=f"cat{k}",
                                 member_factor_ids=frozenset({f"cause{k}"}))
        for k in range(n_categories)
    }
    return FactorCatalog(categories=categories, factors=factors)


def separable_setup(n_sentences=500, n_categories=5, dim=16, seed=0,
                    tokens_per_category=6, negative_fraction=0.2):
    """Category-disjoint vocabularies over exactly orthogonal embeddings.

    Every sentence is one comment; roughly ``negative_fraction`` of them are
    explicit negatives drawn from their own orthogonal vocabulary.
    """
    assert dim > n_categories
    rng = np.random.default_rng(seed)
    basis = np.eye(dim)
    vectors: dict[str, np.ndarray] = {}
    vocab: dict[int, list[str]] = {}
    for k in range(n_categories):
        vocab[k] = [f"w{k}tok{j}" for j in range(tokens_per_category)]
        for token in vocab[k]:
            vectors[token] = basis[k]
        vectors[f"cause{k}"] = basis[k]
    negative_vocab = [f"neg{j}" for j in range(tokens_per_category)]
    for token in negative_vocab:
        vectors[token] = basis[n_categories]

    n_negative = int(round(negative_fraction * n_sentences))
    comments = []
    for i in range(n_sentences):
        if i < n_negative:
            tokens = rng.choice(negative_vocab, size=rng.integers(4, 9))
            labels = frozenset()
        else:
            k = (i - n_negative) % n_categories
            tokens = rng.choice(vocab[k], size=rng.integers(4, 9))
            labels = frozenset({f"cat{k}"})
        comment = Comment.from_text(f"s{i:04d}", " ".join(tokens))
        sentence = replace(comment.sentences[0], labels=labels)
        comments.append(replace(comment, sentences=(sentence,)))

    store = EmbeddingStore(dim=dim, vectors=vectors, stopwords=frozenset())
    return comments, toy_catalog(n_categories), store


def run_detection_resolution_experiment(comments, catalog, source, config: TrainingConfig):
    """The standard supervised experiment: split, train, tune, evaluate.

    Returns (detection counts dict, top-k correct counts, n holdout
    positives) over the held-out split.
    """
    keys = [
        (c.id, s.index)
        for c in comments for s in c.sentences
        if s.labels is not None and s.tokens
    ]
    train_keys, holdout_keys = split_keys(keys, config.holdout_fraction, config.seed)
    train_set = set(train_keys)
    pairs = [p for p in build_pairs(comments, catalog) if p.sentence_key in train_set]
    model = train(pairs, source, config)

    by_key = {(c.id, s.index): s for c in comments for s in c.sentences}
    reprs = factor_representations(source, catalog.factor_ids)
    _, selection_keys = split_keys(train_keys, config.model_selection_fraction, config.seed)
    tuning_keys = selection_keys or train_keys
    tune_detection_threshold(
        model,
        [max_factor_score(model, source.sentence_vectors(k), reprs) for k in tuning_keys],
        [by_key[k].is_positive for k in tuning_keys],
    )

    detected_flags, truth_flags = [], []
    top_correct = {1: 0, 3: 0}
    n_positive = 0
    for key in holdout_keys:
        sentence = by_key[key]
        detected, ranked = predict(model, source.sentence_vectors(key), catalog, reprs)
        categories = [catalog.category_of(fid) for fid, _ in ranked]
        detected_flags.append(detected)
        truth_flags.append(sentence.is_positive)
        if sentence.is_positive:
            n_positive += 1
            for k in top_correct:
                if set(categories[:k]) & sentence.labels:
                    top_correct[k] += 1
    return model, detected_flags, truth_flags, top_correct, n_positive


def run_separable_experiment(n_sentences=500, seed=0, config: TrainingConfig | None = None):
    comments, catalog, store = separable_setup(n_sentences=n_sentences, seed=seed)
    source = StaticVectorSource(store, comments, catalog)
    config = config or TrainingConfig(
        learning_rate=0.05, batch_size=4, n_epochs=50, pos_weight=4.0,
        dropout_rate=0.1, seed=seed,
    )
    return run_detection_resolution_experiment(comments, catalog, source, config)
