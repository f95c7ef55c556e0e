"""The attribution classifier: cross-attention sentence scoring over a factor catalog.

A (sentence, factor) pair is represented by concatenating a factor-attended
sentence vector with the factor representation; a single learned linear layer
plus sigmoid maps that to an attribution probability. Token vectors are
consumed frozen, either from a static embedding store or from token-vector
files produced by an external contextual extractor.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import json

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import Comment, CorpusStats, Sentence
from .embeddings import EmbeddingStore, cosine, idf
from .factors import Factor, FactorCatalog


def sigmoid(z):
    """Numerically stable logistic function, elementwise."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TokenVectors:
    """Per-token vectors for one sentence (or one factor phrase).

    ``key`` is (comment_id, sentence_index) for sentences and
    (factor_id, 0) for factor phrases.
    """

    key: tuple[str, int]
    dim: int
    vectors: np.ndarray  # n_tokens x dim

    def __post_init__(self):
        arr = np.asarray(self.vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise ValueError(f"token vectors for {self.key} must be n x {self.dim}, got shape {arr.shape}")
        object.__setattr__(self, "vectors", arr)

    @property
    def n_tokens(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class LabeledPair:
    sentence_key: tuple[str, int]
    factor_id: str
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 2e-5
    batch_size: int = 4
    n_epochs: int = 3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    pos_weight: float = 1.0
    dropout_rate: float = 0.1
    seed: int = 0
    train_fraction: float = 0.8
    holdout_fraction: float = 0.2
    model_selection_fraction: float = 0.1
    attention_softmax: bool = False

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.pos_weight < 1.0:
            raise ValueError(f"pos_weight must be >= 1, got {self.pos_weight}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        for name in ("train_fraction", "holdout_fraction", "model_selection_fraction"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {value}")


@dataclass
class AttributionModel:
    """Learned parameters plus the tuned detection threshold."""

    dim: int
    w: np.ndarray  # length 2 * dim
    b: float
    detection_threshold: float | None = None
    attention_softmax: bool = False
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        if self.w.shape != (2 * self.dim,):
            raise ValueError(f"w must have length {2 * self.dim}, got shape {self.w.shape}")


# ---------------------------------------------------------------------------
# representations


def factor_representation(vectors: TokenVectors) -> np.ndarray:
    """Unweighted mean over the phrase token vectors."""
    if vectors.n_tokens == 0:
        raise ValueError(f"factor {vectors.key[0]!r} has no token vectors")
    return vectors.vectors.mean(axis=0)


def attended_representation(
    sentence_vectors: TokenVectors,
    factor_repr: np.ndarray,
    softmax: bool = False,
) -> np.ndarray:
    """Factor-attended sentence vector: sum of alpha_i * e(w_i).

    The weights alpha_i are raw token-factor cosines by default (they may be
    negative; there is intentionally no normalization). ``softmax=True``
    switches to softmax-normalized weights for ablation.
    """
    if sentence_vectors.n_tokens == 0:
        raise ValueError(f"sentence {sentence_vectors.key} is empty")
    factor_repr = np.asarray(factor_repr, dtype=np.float64)
    if factor_repr.shape != (sentence_vectors.dim,):
        raise ValueError(
            f"dimension mismatch: factor is {factor_repr.shape}, sentence vectors are dim {sentence_vectors.dim}"
        )
    rows = sentence_vectors.vectors
    norms = np.linalg.norm(rows, axis=1)
    f_norm = np.linalg.norm(factor_repr)
    denom = norms * f_norm
    alphas = np.zeros(len(rows))
    ok = denom > 0
    alphas[ok] = np.clip((rows[ok] @ factor_repr) / denom[ok], -1.0, 1.0)
    if softmax:
        e = np.exp(alphas - alphas.max())
        alphas = e / e.sum()
    return alphas @ rows


def pair_features(
    sentence_vectors: TokenVectors,
    factor_repr: np.ndarray,
    softmax: bool = False,
) -> np.ndarray:
    """Concatenated [attended sentence : factor] representation (length 2*dim)."""
    return np.concatenate([attended_representation(sentence_vectors, factor_repr, softmax), factor_repr])


def score(model: AttributionModel, sentence_vectors: TokenVectors, factor_repr: np.ndarray) -> float:
    """Attribution probability for one (sentence, factor) pair, dropout off."""
    if sentence_vectors.dim != model.dim:
        raise ValueError(f"model dim {model.dim} != sentence vectors dim {sentence_vectors.dim}")
    feats = pair_features(sentence_vectors, factor_repr, model.attention_softmax)
    return float(sigmoid(feats @ model.w + model.b))


# ---------------------------------------------------------------------------
# training


def bce_loss_and_grad(
    w: np.ndarray,
    b: float,
    X: np.ndarray,
    y: np.ndarray,
    pos_weight: float = 1.0,
) -> tuple[float, np.ndarray, float]:
    """Mean positive-weighted binary cross entropy and its (w, b) gradient.

    Per-sample loss is -(pos_weight * y * ln p + (1 - y) * ln(1 - p)); with
    pos_weight = 1 this is plain BCE.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z = X @ w + b
    p = sigmoid(z)
    eps = 1e-12
    p_clipped = np.clip(p, eps, 1.0 - eps)
    losses = -(pos_weight * y * np.log(p_clipped) + (1.0 - y) * np.log(1.0 - p_clipped))
    dz = np.where(y == 1.0, pos_weight * (p - 1.0), p)
    n = len(y)
    return float(losses.mean()), X.T @ dz / n, float(dz.mean())


def _binary_f1(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    # internal checkpoint criterion; degenerate cases collapse to 0
    tp = float(np.sum((y_true == 1) & (y_pred == 1)))
    fp = float(np.sum((y_true == 0) & (y_pred == 1)))
    fn = float(np.sum((y_true == 1) & (y_pred == 0)))
    if tp == 0.0:
        return 0.0
    return 2.0 * tp / (2.0 * tp + fp + fn)


class AttributionClassifier(BaseEstimator):
    """Logistic layer over precomputed pair features, trained with Adam.

    Inverted dropout on the feature vector during training only. When an
    ``eval_set`` is supplied, fit keeps the epoch checkpoint with the best
    pair-level F1 on it; otherwise the final epoch wins. Fixed
    ``random_state`` makes the whole trajectory reproducible.
    """

    def __init__(self, learning_rate=2e-5, batch_size=4, n_epochs=3,
                 adam_beta1=0.9, adam_beta2=0.999, adam_eps=1e-8,
                 pos_weight=1.0, dropout_rate=0.1, random_state=0):
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.n_epochs = n_epochs
        self.adam_beta1 = adam_beta1
        self.adam_beta2 = adam_beta2
        self.adam_eps = adam_eps
        self.pos_weight = pos_weight
        self.dropout_rate = dropout_rate
        self.random_state = random_state

    def fit(self, X, y, eval_set: tuple[np.ndarray, np.ndarray] | None = None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or len(X) != len(y):
            raise ValueError(f"bad training shapes: X {X.shape}, y {y.shape}")
        if len(np.unique(y)) < 2:
            raise ValueError("training data contains a single class")
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        m_w = np.zeros(d)
        v_w = np.zeros(d)
        m_b = 0.0
        v_b = 0.0
        t = 0
        shuffle_rng = random.Random(self.random_state)
        dropout_rng = np.random.default_rng(self.random_state)
        beta1, beta2, eps = self.adam_beta1, self.adam_beta2, self.adam_eps
        lr = self.learning_rate

        best = None  # (f1, epoch, w, b)
        self.history_ = []
        for epoch in range(self.n_epochs):
            order = list(range(n))
            shuffle_rng.shuffle(order)
            epoch_loss = 0.0
            n_batches = 0
            for start in range(0, n, self.batch_size):
                idx = order[start:start + self.batch_size]
                Xb = X[idx]
                if self.dropout_rate > 0.0:
                    keep = 1.0 - self.dropout_rate
                    mask = (dropout_rng.random(Xb.shape) < keep) / keep
                    Xb = Xb * mask
                loss, gw, gb = bce_loss_and_grad(w, b, Xb, y[idx], self.pos_weight)
                t += 1
                m_w = beta1 * m_w + (1 - beta1) * gw
                v_w = beta2 * v_w + (1 - beta2) * gw * gw
                m_b = beta1 * m_b + (1 - beta1) * gb
                v_b = beta2 * v_b + (1 - beta2) * gb * gb
                bias1 = 1 - beta1 ** t
                bias2 = 1 - beta2 ** t
                w = w - lr * (m_w / bias1) / (np.sqrt(v_w / bias2) + eps)
                b = b - lr * (m_b / bias1) / (np.sqrt(v_b / bias2) + eps)
                epoch_loss += loss
                n_batches += 1
            val_f1 = None
            if eval_set is not None:
                X_val, y_val = eval_set
                preds = sigmoid(np.asarray(X_val) @ w + b) >= 0.5
                val_f1 = _binary_f1(np.asarray(y_val), preds)
                if best is None or val_f1 > best[0]:
                    best = (val_f1, epoch, w.copy(), b)
            self.history_.append({"epoch": epoch, "train_loss": epoch_loss / max(n_batches, 1), "val_f1": val_f1})

        if best is not None:
            _, self.best_epoch_, w, b = best
        else:
            self.best_epoch_ = self.n_epochs - 1
        self.w_ = w
        self.b_ = b
        self.n_features_in_ = d
        return self

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(np.asarray(X, dtype=np.float64) @ self.w_ + self.b_)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(int)


# ---------------------------------------------------------------------------
# vector sources


class StaticVectorSource:
    """Token vectors straight from a static embedding store.

    Out-of-vocabulary tokens get zero vectors so that every sentence keeps
    one vector per token; zero rows contribute nothing to the attended sum.
    """

    def __init__(self, store: EmbeddingStore, comments: Sequence[Comment], catalog: FactorCatalog):
        self._store = store
        self._tokens = {(c.id, s.index): s.tokens for c in comments for s in c.sentences}
        self._catalog = catalog

    @property
    def dim(self) -> int:
        return self._store.dim

    def _rows(self, tokens: Sequence[str]) -> np.ndarray:
        rows = np.zeros((len(tokens), self._store.dim))
        for i, t in enumerate(tokens):
            vec = self._store.get(t)
            if vec is not None:
                rows[i] = vec
        return rows

    def sentence_vectors(self, key: tuple[str, int]) -> TokenVectors:
        if key not in self._tokens:
            raise ValueError(f"unknown sentence key {key}")
        return TokenVectors(key=key, dim=self._store.dim, vectors=self._rows(self._tokens[key]))

    def factor_vectors(self, factor_id: str) -> TokenVectors:
        factor = self._catalog.factors[factor_id]
        return TokenVectors(key=(factor_id, 0), dim=self._store.dim, vectors=self._rows(factor.phrase))


class FileVectorSource:
    """Token vectors parsed from extractor-produced token-vector files."""

    def __init__(self, sentences: dict[tuple[str, int], TokenVectors],
                 factors: dict[tuple[str, int], TokenVectors], dim: int):
        self._sentences = sentences
        self._factors = factors
        self.dim = dim

    @classmethod
    def from_files(cls, sentence_path: str | Path, factor_path: str | Path) -> "FileVectorSource":
        dim_s, sentences = read_token_vectors(sentence_path)
        dim_f, factors = read_token_vectors(factor_path)
        if dim_s != dim_f:
            raise ValueError(f"dimension mismatch between vector files: {dim_s} vs {dim_f}")
        return cls(sentences=sentences, factors=factors, dim=dim_s)

    def sentence_vectors(self, key: tuple[str, int]) -> TokenVectors:
        if key not in self._sentences:
            raise ValueError(f"no token vectors for sentence {key}")
        return self._sentences[key]

    def factor_vectors(self, factor_id: str) -> TokenVectors:
        key = (factor_id, 0)
        if key not in self._factors:
            raise ValueError(f"no token vectors for factor {factor_id!r}")
        return self._factors[key]


def factor_representations(source, factor_ids: Iterable[str]) -> dict[str, np.ndarray]:
    """Precompute mean-phrase representations for a set of factors."""
    return {fid: factor_representation(source.factor_vectors(fid)) for fid in sorted(factor_ids)}


# ---------------------------------------------------------------------------
# pair construction and training

def build_pairs(comments: Sequence[Comment], catalog: FactorCatalog) -> list[LabeledPair]:
    """Expand annotated sentences into (sentence, factor) training pairs.

    For a positive sentence, every catalog factor whose category is among
    the sentence labels is a positive pair and every other factor a
    negative; explicitly negative sentences contribute all-negative pairs.
    Unannotated and token-free sentences are skipped.
    """
    pairs = []
    fids = catalog.factor_ids
    for comment in comments:
        for sentence in comment.sentences:
            if sentence.labels is None or not sentence.tokens:
                continue
            key = (comment.id, sentence.index)
            for fid in fids:
                positive = catalog.factors[fid].category in sentence.labels
                pairs.append(LabeledPair(sentence_key=key, factor_id=fid, label=int(positive)))
    return pairs


def split_keys(keys: Iterable, fraction: float, seed: int) -> tuple[list, list]:
    """Deterministically split keys into (rest, held) with |held| ~ fraction.

    Keys are sorted before shuffling so the split does not depend on input
    order.
    """
    ordered = sorted(keys)
    random.Random(seed).shuffle(ordered)
    n_held = int(round(fraction * len(ordered)))
    return ordered[n_held:], ordered[:n_held]


def train(pairs: Sequence[LabeledPair], vectors_source, config: TrainingConfig) -> AttributionModel:
    """Fit the attribution model on labeled pairs.

    Sentences are split 90:10 (by ``model_selection_fraction``) into an
    inner training set and a model-selection set; the epoch checkpoint with
    the best model-selection F1 is returned. Deterministic given
    ``config.seed``.
    """
    if not pairs:
        raise ValueError("no training pairs")
    dim = vectors_source.dim
    reprs = factor_representations(vectors_source, {p.factor_id for p in pairs})
    sentence_cache: dict[tuple[str, int], TokenVectors] = {}

    def sent(key):
        if key not in sentence_cache:
            sentence_cache[key] = vectors_source.sentence_vectors(key)
        return sentence_cache[key]

    X = np.stack([pair_features(sent(p.sentence_key), reprs[p.factor_id], config.attention_softmax) for p in pairs])
    y = np.array([p.label for p in pairs], dtype=np.float64)

    train_keys, val_keys = split_keys({p.sentence_key for p in pairs}, config.model_selection_fraction, config.seed)
    val_set = set(val_keys)
    is_val = np.array([p.sentence_key in val_set for p in pairs])
    if len(np.unique(y[~is_val])) < 2:
        raise ValueError("training split contains a single class")
    eval_set = (X[is_val], y[is_val]) if is_val.any() else None

    clf = AttributionClassifier(
        learning_rate=config.learning_rate, batch_size=config.batch_size,
        n_epochs=config.n_epochs, adam_beta1=config.adam_beta1,
        adam_beta2=config.adam_beta2, adam_eps=config.adam_eps,
        pos_weight=config.pos_weight, dropout_rate=config.dropout_rate,
        random_state=config.seed,
    ).fit(X[~is_val], y[~is_val], eval_set=eval_set)

    provenance = {
        "config": asdict(config),
        "n_pairs": len(pairs),
        "n_sentences": len(train_keys) + len(val_keys),
        "n_model_selection_sentences": len(val_keys),
        "best_epoch": clf.best_epoch_,
    }
    return AttributionModel(
        dim=dim, w=clf.w_, b=clf.b_, detection_threshold=None,
        attention_softmax=config.attention_softmax, provenance=provenance,
    )


def max_factor_score(model: AttributionModel, sentence_vectors: TokenVectors,
                     factor_reprs: Mapping[str, np.ndarray]) -> float:
    """Score of the top-most attributing factor for one sentence."""
    if not factor_reprs:
        raise ValueError("no factor representations")
    return max(score(model, sentence_vectors, r) for r in factor_reprs.values())


def tune_detection_threshold(
    model: AttributionModel,
    max_scores: Sequence[float],
    has_attribution: Sequence[bool],
) -> float:
    """Pick the detection threshold maximizing F1 on validation sentences.

    Candidates are the distinct observed per-sentence max scores; ties go
    to the lowest threshold. The chosen value is stored on the model.
    """
    if len(max_scores) == 0:
        raise ValueError("empty validation set")
    if len(max_scores) != len(has_attribution):
        raise ValueError("max_scores and has_attribution lengths differ")
    scores_arr = np.asarray(max_scores, dtype=np.float64)
    truth = np.asarray(has_attribution, dtype=bool).astype(int)
    best_t = None
    best_f1 = -1.0
    for t in sorted(set(scores_arr.tolist())):
        f1 = _binary_f1(truth, (scores_arr >= t).astype(int))
        if f1 > best_f1:
            best_t, best_f1 = t, f1
    model.detection_threshold = float(best_t)
    return model.detection_threshold


def predict(
    model: AttributionModel,
    sentence_vectors: TokenVectors,
    catalog: FactorCatalog,
    vectors_for_factors: Mapping[str, TokenVectors] | Mapping[str, np.ndarray],
) -> tuple[bool, list[tuple[str, float]]]:
    """Score every catalog factor for one sentence.

    Returns (detected, ranked) where ranked is (factor_id, score) sorted by
    descending score with lexicographic tie-break. Requires a tuned
    detection threshold.
    """
    if model.detection_threshold is None:
        raise ValueError("model has no tuned detection threshold")
    scored = []
    for fid in catalog.factor_ids:
        if fid not in vectors_for_factors:
            raise ValueError(f"no vectors for factor {fid!r}")
        value = vectors_for_factors[fid]
        repr_vec = factor_representation(value) if isinstance(value, TokenVectors) else np.asarray(value)
        scored.append((fid, score(model, sentence_vectors, repr_vec)))
    ranked = sorted(scored, key=lambda kv: (-kv[1], kv[0]))
    detected = ranked[0][1] >= model.detection_threshold
    return detected, ranked


# ---------------------------------------------------------------------------
# untrained similarity baseline


def baseline_score(sentence: Sentence, factor: Factor, store: EmbeddingStore, stats: CorpusStats) -> float:
    """Cosine between idf-weighted static embedding sums of sentence and phrase.

    Stopwords and out-of-vocabulary tokens are dropped on both sides; a
    side left empty makes the score 0.
    """
    return cosine(
        _idf_weighted_sum(sentence.tokens, store, stats),
        _idf_weighted_sum(factor.phrase, store, stats),
    )


def _idf_weighted_sum(tokens: Sequence[str], store: EmbeddingStore, stats: CorpusStats) -> np.ndarray:
    total = np.zeros(store.dim)
    for t in tokens:
        if t in store.stopwords:
            continue
        vec = store.get(t)
        if vec is not None:
            total += idf(stats, t) * vec
    return total


def rank_factors_baseline(
    sentence: Sentence,
    catalog: FactorCatalog,
    store: EmbeddingStore,
    stats: CorpusStats,
) -> list[tuple[str, float]]:
    """Rank catalog factors for a sentence by the untrained baseline score."""
    scored = [(fid, baseline_score(sentence, catalog.factors[fid], store, stats)) for fid in catalog.factor_ids]
    return sorted(scored, key=lambda kv: (-kv[1], kv[0]))


# ---------------------------------------------------------------------------
# token-vector and model files


def format_float(x: float) -> str:
    """Nine-significant-digit float formatting used by the token-vector format."""
    return f"{float(x):.9g}"


def write_token_vectors(path: str | Path, blocks: Iterable[TokenVectors], dim: int | None = None) -> None:
    """Write token-vector blocks in the interchange text format.

    Layout: a ``DIM <d>`` header, then per block a ``KEY <id> <index> <n>``
    line followed by n lines of d space-separated floats at 9 significant
    digits. ``dim`` is only needed when ``blocks`` may be empty.
    """
    blocks = list(blocks)
    if blocks:
        dims = {b.dim for b in blocks}
        if len(dims) > 1:
            raise ValueError(f"mixed dimensions in token vector blocks: {sorted(dims)}")
        dim = blocks[0].dim
    if dim is None:
        raise ValueError("dim is required when writing an empty token-vector file")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"DIM {dim}\n")
        for block in blocks:
            name, index = block.key
            if not name or any(c.isspace() for c in name):
                raise ValueError(f"token-vector key {name!r} must be non-empty and whitespace-free")
            handle.write(f"KEY {name} {index} {block.n_tokens}\n")
            for row in block.vectors:
                handle.write(" ".join(format_float(x) for x in row) + "\n")


def read_token_vectors(path: str | Path) -> tuple[int, dict[tuple[str, int], TokenVectors]]:
    """Parse a token-vector file; returns (dim, blocks keyed by (id, index))."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("DIM "):
        raise ValueError("token-vector file must start with a 'DIM <d>' header")
    try:
        dim = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError(f"bad DIM header: {lines[0]!r}") from None
    blocks: dict[tuple[str, int], TokenVectors] = {}
    i = 1
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        fields = line.split()
        if fields[0] != "KEY" or len(fields) != 4:
            raise ValueError(f"line {i + 1}: expected 'KEY <id> <index> <n_tokens>', got {line!r}")
        try:
            key = (fields[1], int(fields[2]))
            n_tokens = int(fields[3])
        except ValueError:
            raise ValueError(f"line {i + 1}: bad KEY fields in {line!r}") from None
        if key in blocks:
            raise ValueError(f"line {i + 1}: duplicate key {key}")
        rows = np.empty((n_tokens, dim))
        for j in range(n_tokens):
            if i + 1 + j >= len(lines):
                raise ValueError(f"line {i + 1}: block {key} truncated")
            values = lines[i + 1 + j].split()
            if len(values) != dim:
                raise ValueError(f"line {i + 2 + j}: expected {dim} floats, got {len(values)}")
            rows[j] = [float(v) for v in values]
        blocks[key] = TokenVectors(key=key, dim=dim, vectors=rows)
        i += 1 + n_tokens
    return dim, blocks


def save_model(model: AttributionModel, path: str | Path) -> None:
    payload = {
        "dim": model.dim,
        "w": [float(x) for x in model.w],
        "b": float(model.b),
        "detection_threshold": model.detection_threshold,
        "attention_softmax": model.attention_softmax,
        "provenance": model.provenance,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> AttributionModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return AttributionModel(
        dim=payload["dim"],
        w=np.array(payload["w"], dtype=np.float64),
        b=payload["b"],
        detection_threshold=payload["detection_threshold"],
        attention_softmax=payload.get("attention_softmax", False),
        provenance=payload.get("provenance", {}),
    )
