"""attrimine: attribution-factor mining for social-media comment corpora.

The pipeline filters a comment corpus down to crisis-relevant comments via
embedding similarity, characterizes it with Gibbs-sampled LDA topics, and
trains a cross-attention classifier that detects and resolves which catalog
factor a sentence holds responsible.
"""

__version__ = "0.1.0"

from .attribution import (
    AttributionClassifier,
    AttributionModel,
    FileVectorSource,
    LabeledPair,
    StaticVectorSource,
    TokenVectors,
    TrainingConfig,
    attended_representation,
    baseline_score,
    build_pairs,
    factor_representation,
    predict,
    score,
    train,
    tune_detection_threshold,
)
from .corpus import (
    Comment,
    CorpusStats,
    Sentence,
    compute_stats,
    english_heuristic_filter,
    ingest,
    load_annotations,
    sentence_split,
    tokenize,
)
from .embeddings import EmbeddingStore, SentenceEmbedding, cosine, idf, load_vectors, sentence_embedding
from .evaluation import (
    DetectionOutcome,
    ResolutionOutcome,
    category_breakdown,
    detection_metrics,
    fleiss_kappa,
    resolution_eval,
)
from .factors import BroadCategory, Factor, FactorCatalog, factor_embedding, load_catalog, load_default_catalog
from .pruning import SimilarityRecord, comment_factor_sim, prune, token_frequency_export
from .topics import GibbsLda, LdaConfig, TopicModel, fit_lda, top_tokens, topic_proportions

__all__ = [
    "AttributionClassifier",
    "AttributionModel",
    "BroadCategory",
    "Comment",
    "CorpusStats",
    "DetectionOutcome",
    "EmbeddingStore",
    "Factor",
    "FactorCatalog",
    "FileVectorSource",
    "GibbsLda",
    "LabeledPair",
    "LdaConfig",
    "ResolutionOutcome",
    "Sentence",
    "SentenceEmbedding",
    "SimilarityRecord",
    "StaticVectorSource",
    "TokenVectors",
    "TopicModel",
    "TrainingConfig",
    "attended_representation",
    "baseline_score",
    "build_pairs",
    "category_breakdown",
    "comment_factor_sim",
    "compute_stats",
    "cosine",
    "detection_metrics",
    "english_heuristic_filter",
    "factor_embedding",
    "factor_representation",
    "fit_lda",
    "fleiss_kappa",
    "idf",
    "ingest",
    "load_annotations",
    "load_catalog",
    "load_default_catalog",
    "load_vectors",
    "predict",
    "prune",
    "resolution_eval",
    "score",
    "sentence_embedding",
    "sentence_split",
    "token_frequency_export",
    "tokenize",
    "top_tokens",
    "topic_proportions",
    "train",
    "tune_detection_threshold",
]
