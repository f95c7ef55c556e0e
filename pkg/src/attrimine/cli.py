"""Pipeline command line: one subcommand per stage, file artifacts, run manifests.

Every stage writes its artifacts plus a ``manifest.json`` snapshotting the
config, input hashes, and seed, so a run can be reproduced exactly. With a
fixed seed the artifacts themselves are byte-identical across reruns; the
manifest additionally records wall time and is the one file allowed to
differ.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .attribution import (
    FileVectorSource,
    StaticVectorSource,
    TrainingConfig,
    build_pairs,
    factor_representations,
    load_model,
    max_factor_score,
    predict,
    save_model,
    split_keys,
    train,
    tune_detection_threshold,
)
from .corpus import (
    DEFAULT_ENGLISH_MIN_RATIO,
    Comment,
    Sentence,
    compute_stats,
    english_heuristic_filter,
    ingest,
    load_annotations,
)
from .embeddings import load_stopwords, load_vectors
from .evaluation import (
    DetectionOutcome,
    category_breakdown,
    detection_metrics,
    format_report,
    joint_resolution_metrics,
    metrics_keyvalues,
    resolution_eval,
)
from .factors import FactorCatalog, load_catalog, load_default_catalog
from .pruning import prune, token_frequency_export
from .topics import LdaConfig, fit_lda, top_tokens


@dataclass
class RunConfig:
    """Parsed run configuration; relative paths resolve against the config file."""

    raw: dict
    base_dir: Path
    seed: int

    @classmethod
    def load(cls, path: str | Path, seed_override: int | None = None) -> "RunConfig":
        path = Path(path)
        raw = json.loads(path.read_text(encoding="utf-8"))
        seed = seed_override if seed_override is not None else int(raw.get("seed", 0))
        return cls(raw=raw, base_dir=path.parent.resolve(), seed=seed)

    def path(self, name: str, required: bool = True) -> Path | None:
        value = self.raw.get("paths", {}).get(name)
        if value is None:
            if required:
                raise ValueError(f"config is missing required path {name!r}")
            return None
        return (self.base_dir / value).resolve()

    def section(self, name: str) -> dict:
        return dict(self.raw.get(name, {}))

    @property
    def out_dir(self) -> Path:
        return self.path("out_dir")

    def stage_dir(self, stage: str) -> Path:
        d = self.out_dir / stage
        d.mkdir(parents=True, exist_ok=True)
        return d

    def lda_config(self) -> LdaConfig:
        section = self.section("lda")
        section.setdefault("seed", self.seed)
        return LdaConfig(**section)

    def training_config(self) -> TrainingConfig:
        section = self.section("training")
        section.setdefault("seed", self.seed)
        return TrainingConfig(**section)

    def load_catalog(self) -> FactorCatalog:
        catalog_path = self.path("catalog", required=False)
        return load_catalog(catalog_path) if catalog_path else load_default_catalog()


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _require_input(path: Path | None, label: str) -> Path:
    if path is None:
        raise ValueError(f"config is missing required path {label!r}")
    if not path.exists():
        raise FileNotFoundError(f"{label} path not found: {path}")
    return path


def _require_artifact(path: Path, stage: str) -> Path:
    if not path.exists():
        raise FileNotFoundError(f"missing artifact: {stage} (expected {path})")
    return path


def _write_manifest(stage_dir: Path, stage: str, config: RunConfig,
                    inputs: dict[str, Path], started: float) -> None:
    manifest = {
        "stage": stage,
        "version": __version__,
        "seed": config.seed,
        "config": config.raw,
        "inputs": {name: {"path": str(p), "sha256": _sha256(p)} for name, p in sorted(inputs.items())},
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    (stage_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# corpus artifact format


def write_corpus_artifact(comments: Sequence[Comment], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for c in comments:
            record = {
                "id": c.id,
                "video_id": c.video_id,
                "author_id": c.author_id,
                "raw_text": c.raw_text,
                "sentences": [
                    {
                        "index": s.index,
                        "text": s.text,
                        "tokens": list(s.tokens),
                        "labels": sorted(s.labels) if s.labels is not None else None,
                    }
                    for s in c.sentences
                ],
            }
            handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")


def read_corpus_artifact(path: Path) -> list[Comment]:
    comments = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        sentences = tuple(
            Sentence(
                index=s["index"],
                text=s["text"],
                tokens=tuple(s["tokens"]),
                labels=frozenset(s["labels"]) if s["labels"] is not None else None,
            )
            for s in record["sentences"]
        )
        comments.append(Comment(
            id=record["id"], video_id=record["video_id"], author_id=record["author_id"],
            raw_text=record["raw_text"], sentences=sentences,
        ))
    return comments


# ---------------------------------------------------------------------------
# stages


def cmd_ingest(config: RunConfig) -> None:
    started = time.monotonic()
    dump = _require_input(config.path("corpus_dump"), "corpus_dump")
    dump_format = config.raw.get("dump_format", "jsonl")
    comments = ingest(dump, format=dump_format)
    english = config.section("english_filter")
    if english.get("enabled", False):
        ratio = float(english.get("min_ratio", DEFAULT_ENGLISH_MIN_RATIO))
        comments = english_heuristic_filter(comments, ratio)
    stats = compute_stats(comments)
    stage_dir = config.stage_dir("ingest")
    write_corpus_artifact(comments, stage_dir / "corpus.jsonl")
    (stage_dir / "stats.json").write_text(
        json.dumps(
            {
                "n_comments": stats.n_comments,
                "n_sentences": stats.n_sentences,
                "n_labeled_positive_sentences": stats.n_labeled_positive_sentences,
                "document_frequency": dict(sorted(stats.document_frequency.items())),
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    _write_manifest(stage_dir, "ingest", config, {"corpus_dump": dump}, started)


def _load_ingested(config: RunConfig) -> tuple[Path, list[Comment]]:
    artifact = _require_artifact(config.out_dir / "ingest" / "corpus.jsonl", "corpus")
    return artifact, read_corpus_artifact(artifact)


def cmd_prune(config: RunConfig) -> None:
    started = time.monotonic()
    corpus_path, comments = _load_ingested(config)
    vectors_path = _require_input(config.path("vectors"), "vectors")
    stopwords_path = _require_input(config.path("stopwords"), "stopwords")
    store = load_vectors(vectors_path, stopwords_path)
    catalog = config.load_catalog()
    stats = compute_stats(comments)
    section = config.section("pruning")
    kept, records = prune(
        comments, catalog, store, stats,
        percentile=float(section.get("percentile", 0.20)),
        threshold=float(section.get("threshold", 0.7)),
    )
    stage_dir = config.stage_dir("prune")
    write_corpus_artifact(kept, stage_dir / "corpus.jsonl")
    with open(stage_dir / "similarity.tsv", "w", encoding="utf-8") as handle:
        for record in records:
            for fid in sorted(record.scores):
                handle.write(f"{record.comment_id}\t{fid}\t{record.scores[fid]!r}\n")
            handle.write(f"{record.comment_id}\tMAX\t{record.max_score!r}\t{record.argmax_factor}\n")
    frequencies = token_frequency_export(comments, store.stopwords)
    with open(stage_dir / "token_frequency.tsv", "w", encoding="utf-8") as handle:
        for token, count in sorted(frequencies.items(), key=lambda kv: (-kv[1], kv[0])):
            handle.write(f"{token}\t{count}\n")
    inputs = {"corpus": corpus_path, "vectors": vectors_path, "stopwords": stopwords_path}
    _write_manifest(stage_dir, "prune", config, inputs, started)


def cmd_topics(config: RunConfig) -> None:
    started = time.monotonic()
    corpus_path, comments = _load_ingested(config)
    stopwords_path = _require_input(config.path("stopwords"), "stopwords")
    stopwords = load_stopwords(stopwords_path)
    lda_config = config.lda_config()
    model = fit_lda(comments, lda_config, stopwords)
    stage_dir = config.stage_dir("topics")

    def write_matrix(name: str, matrix: np.ndarray) -> None:
        with open(stage_dir / name, "w", encoding="utf-8") as handle:
            for row in matrix:
                handle.write(" ".join(f"{x:.9g}" for x in row) + "\n")

    write_matrix("topic_word.txt", model.topic_word)
    write_matrix("doc_topic.txt", model.doc_topic)
    with open(stage_dir / "topics_summary.txt", "w", encoding="utf-8") as handle:
        handle.write("topic\tproportion\ttop_tokens\n")
        for k in range(model.n_topics):
            tokens = " ".join(top_tokens(model, k, 10))
            handle.write(f"{k}\t{model.topic_proportions[k]:.6f}\t{tokens}\n")
    (stage_dir / "vocabulary.txt").write_text("\n".join(model.vocabulary) + "\n", encoding="utf-8")
    _write_manifest(stage_dir, "topics", config, {"corpus": corpus_path, "stopwords": stopwords_path}, started)


def _vector_source(config: RunConfig, comments: Sequence[Comment], catalog: FactorCatalog):
    """File-based source when token-vector paths are configured, else static."""
    sentence_vectors = config.path("sentence_vectors", required=False)
    factor_vectors = config.path("factor_vectors", required=False)
    if (sentence_vectors is None) != (factor_vectors is None):
        raise ValueError("sentence_vectors and factor_vectors must be configured together")
    inputs: dict[str, Path] = {}
    if sentence_vectors and factor_vectors:
        inputs["sentence_vectors"] = _require_input(sentence_vectors, "sentence_vectors")
        inputs["factor_vectors"] = _require_input(factor_vectors, "factor_vectors")
        return FileVectorSource.from_files(sentence_vectors, factor_vectors), inputs
    vectors_path = _require_input(config.path("vectors"), "vectors")
    stopwords_path = _require_input(config.path("stopwords"), "stopwords")
    inputs["vectors"] = vectors_path
    inputs["stopwords"] = stopwords_path
    store = load_vectors(vectors_path, stopwords_path)
    return StaticVectorSource(store, comments, catalog), inputs


def _labeled_keys(comments: Sequence[Comment]) -> list[tuple[str, int]]:
    return [
        (c.id, s.index)
        for c in comments
        for s in c.sentences
        if s.labels is not None and s.tokens
    ]


def cmd_train(config: RunConfig) -> None:
    started = time.monotonic()
    corpus_path, comments = _load_ingested(config)
    labels_path = _require_input(config.path("labels"), "labels")
    catalog = config.load_catalog()
    annotated = load_annotations(comments, labels_path, catalog.category_ids)
    source, vector_inputs = _vector_source(config, annotated, catalog)
    training_config = config.training_config()

    keys = _labeled_keys(annotated)
    if not keys:
        raise ValueError("no annotated sentences with tokens; nothing to train on")
    train_keys, holdout_keys = split_keys(keys, training_config.holdout_fraction, training_config.seed)
    train_key_set = set(train_keys)
    pairs = [p for p in build_pairs(annotated, catalog) if p.sentence_key in train_key_set]
    model = train(pairs, source, training_config)

    # threshold tuning on the model-selection split (same deterministic split
    # as used inside train())
    _, selection_keys = split_keys(train_keys, training_config.model_selection_fraction, training_config.seed)
    by_key = {
        (c.id, s.index): s
        for c in annotated for s in c.sentences
    }
    reprs = factor_representations(source, catalog.factor_ids)
    tuning_keys = selection_keys if selection_keys else train_keys
    max_scores = [max_factor_score(model, source.sentence_vectors(k), reprs) for k in tuning_keys]
    truths = [by_key[k].is_positive for k in tuning_keys]
    tune_detection_threshold(model, max_scores, truths)

    inputs = {"corpus": corpus_path, "labels": labels_path, **vector_inputs}
    model.provenance["seed"] = training_config.seed
    model.provenance["input_sha256"] = {name: _sha256(p) for name, p in sorted(inputs.items())}

    stage_dir = config.stage_dir("train")
    save_model(model, stage_dir / "model.json")
    split_payload = {
        "train": [list(k) for k in train_keys],
        "holdout": [list(k) for k in holdout_keys],
        "model_selection": [list(k) for k in selection_keys],
    }
    (stage_dir / "split.json").write_text(json.dumps(split_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_manifest(stage_dir, "train", config, inputs, started)


def cmd_eval(config: RunConfig) -> None:
    started = time.monotonic()
    corpus_path, comments = _load_ingested(config)
    model_path = _require_artifact(config.out_dir / "train" / "model.json", "model")
    split_path = _require_artifact(config.out_dir / "train" / "split.json", "train split")
    labels_path = _require_input(config.path("labels"), "labels")
    catalog = config.load_catalog()
    annotated = load_annotations(comments, labels_path, catalog.category_ids)
    source, vector_inputs = _vector_source(config, annotated, catalog)
    model = load_model(model_path)
    split_payload = json.loads(split_path.read_text(encoding="utf-8"))
    holdout_keys = [tuple(k) for k in split_payload["holdout"]]

    by_key = {(c.id, s.index): s for c in annotated for s in c.sentences}
    reprs = factor_representations(source, catalog.factor_ids)

    truth_positive: list[bool] = []
    detected_flags: list[bool] = []
    hits_top1: list[bool] = []
    hits_top3: list[bool] = []
    positive_rankings: list[list[str]] = []
    positive_truths: list[frozenset[str]] = []
    for key in holdout_keys:
        sentence = by_key[key]
        detected, ranked = predict(model, source.sentence_vectors(key), catalog, reprs)
        categories = [catalog.category_of(fid) for fid, _ in ranked]
        positive = sentence.is_positive
        truth_positive.append(positive)
        detected_flags.append(detected)
        hits_top1.append(positive and bool(set(categories[:1]) & sentence.labels))
        hits_top3.append(positive and bool(set(categories[:3]) & sentence.labels))
        if positive:
            positive_rankings.append(categories)
            positive_truths.append(sentence.labels)

    ks = sorted(set(config.section("evaluation").get("ks", [1, 3])) | {1})
    detection = detection_metrics(DetectionOutcome.from_predictions(detected_flags, truth_positive))
    resolution = resolution_eval(positive_rankings, positive_truths, ks=ks) if positive_rankings else None

    columns: dict[str, dict[str, float | None]] = {
        "Detection": {
            "precision": detection.precision,
            "recall": detection.recall,
            "accuracy": detection.accuracy,
            "f1": detection.f1,
        }
    }
    for k, name in ((1, "Resolution"), (3, "Resolution+top3")):
        hits = hits_top1 if k == 1 else hits_top3
        precision, recall, f1 = joint_resolution_metrics(truth_positive, detected_flags, hits)
        columns[name] = {
            "precision": precision,
            "recall": recall,
            "accuracy": resolution.accuracy(k) if resolution else None,
            "f1": f1,
        }

    stage_dir = config.stage_dir("eval")
    (stage_dir / "report.txt").write_text(format_report(columns), encoding="utf-8")
    payload: dict[str, Any] = dict(metrics_keyvalues(columns))
    payload["n_holdout_sentences"] = len(holdout_keys)
    payload["n_holdout_positive"] = sum(truth_positive)
    payload["detection_threshold"] = model.detection_threshold
    (stage_dir / "metrics.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    breakdown = category_breakdown(annotated, catalog.category_ids)
    with open(stage_dir / "breakdown.tsv", "w", encoding="utf-8") as handle:
        for category in catalog.category_ids:
            count, share = breakdown[category]
            share_text = "undef" if share is None else f"{share:.6f}"
            handle.write(f"{category}\t{count}\t{share_text}\n")
    inputs = {"corpus": corpus_path, "labels": labels_path, "model": model_path, **vector_inputs}
    _write_manifest(stage_dir, "eval", config, inputs, started)


def cmd_predict(config: RunConfig, text: str) -> str:
    model_path = _require_artifact(config.out_dir / "train" / "model.json", "model")
    model = load_model(model_path)
    catalog = config.load_catalog()
    vectors_path = _require_input(config.path("vectors"), "vectors")
    stopwords_path = _require_input(config.path("stopwords"), "stopwords")
    store = load_vectors(vectors_path, stopwords_path)
    if store.dim != model.dim:
        raise ValueError(f"model dim {model.dim} does not match vector file dim {store.dim}")
    comment = Comment.from_text("adhoc", text)
    sentences = [s for s in comment.sentences if s.tokens]
    if not sentences:
        raise ValueError("input text contains no tokens")
    source = StaticVectorSource(store, [comment], catalog)
    reprs = factor_representations(source, catalog.factor_ids)
    best_per_factor: dict[str, float] = {}
    for sentence in sentences:
        _, ranked = predict(model, source.sentence_vectors((comment.id, sentence.index)), catalog, reprs)
        for fid, value in ranked:
            best_per_factor[fid] = max(best_per_factor.get(fid, -1.0), value)
    ranked = sorted(best_per_factor.items(), key=lambda kv: (-kv[1], kv[0]))
    detected = ranked[0][1] >= model.detection_threshold
    lines = [f"detected: {'yes' if detected else 'no'} "
             f"(top score {ranked[0][1]:.6f}, threshold {model.detection_threshold:.6f})"]
    seen: set[str] = set()
    rank = 0
    for fid, value in ranked:
        category = catalog.category_of(fid)
        if category in seen:
            continue
        seen.add(category)
        rank += 1
        lines.append(f"{rank}. {category}\t{value:.6f}\t(factor: {fid})")
        if rank == 3:
            break
    return "\n".join(lines)


# ---------------------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="attrimine",
        description="Attribution-factor mining pipeline: ingest, prune, topics, train, eval, predict.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in ("ingest", "prune", "topics", "train", "eval", "predict"):
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", required=True, help="path to the JSON run config")
        sub.add_argument("--seed", type=int, default=None, help="override the config seed")
        if name == "predict":
            sub.add_argument("text", help="ad-hoc text to score")
    args = parser.parse_args(argv)

    try:
        config = RunConfig.load(args.config, seed_override=args.seed)
        config.out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "predict":
            print(cmd_predict(config, args.text))
        else:
            {
                "ingest": cmd_ingest,
                "prune": cmd_prune,
                "topics": cmd_topics,
                "train": cmd_train,
                "eval": cmd_eval,
            }[args.command](config)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
