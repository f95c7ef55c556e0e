"""Comment corpus ingestion, normalization, and sentence-level annotation.

Comments are immutable after ingestion. Every text-processing rule here is
deterministic so that re-running ingestion on the same dump reproduces the
corpus byte for byte.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

_TERMINATOR_RUN = re.compile(r"[.!?\n]+")
_TOKEN_RUN = re.compile(r"[a-z0-9]+")


def sentence_split(raw_text: str) -> list[str]:
    """Split text on runs of ``. ! ?`` and newlines.

    Consecutive terminators collapse into one boundary; empty and
    whitespace-only segments are dropped.
    """
    return [seg.strip() for seg in _TERMINATOR_RUN.split(raw_text) if seg.strip()]


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and return maximal runs of ascii alphanumerics.

    Anything outside [a-z0-9] acts as a separator, so punctuation, emoji
    and non-latin script never survive into tokens.
    """
    return _TOKEN_RUN.findall(text.lower())


@dataclass(frozen=True)
class Sentence:
    """One sentence of a comment.

    ``labels`` is None for sentences no annotator ever saw, and a (possibly
    empty) frozenset of broad-category ids once annotated. The distinction
    matters: unlabeled sentences are excluded from supervised splits, while
    an empty set is an explicit negative.
    """

    index: int
    text: str
    tokens: tuple[str, ...]
    labels: frozenset[str] | None = None

    @property
    def is_annotated(self) -> bool:
        return self.labels is not None

    @property
    def is_positive(self) -> bool:
        return bool(self.labels)


@dataclass(frozen=True)
class Comment:
    id: str
    video_id: str
    author_id: str
    raw_text: str
    sentences: tuple[Sentence, ...]

    @classmethod
    def from_text(cls, id: str, raw_text: str, video_id: str = "", author_id: str = "") -> "Comment":
        sentences = tuple(
            Sentence(index=i, text=text, tokens=tuple(tokenize(text)))
            for i, text in enumerate(sentence_split(raw_text))
        )
        return cls(id=id, video_id=video_id, author_id=author_id, raw_text=raw_text, sentences=sentences)


@dataclass(frozen=True)
class CorpusStats:
    """Corpus-level counts backing idf weighting.

    ``document_frequency`` counts the number of *sentences* a token appears
    in; a sentence is one document here because sentences are the pruning
    and classification unit.
    """

    n_comments: int
    n_sentences: int
    n_labeled_positive_sentences: int
    document_frequency: dict[str, int] = field(default_factory=dict)


def _record_to_comment(record: object, position: int, seen_ids: set[str]) -> Comment:
    if not isinstance(record, dict):
        raise ValueError(f"record {position}: expected an object, got {type(record).__name__}")
    for key in ("id", "text"):
        if key not in record:
            raise ValueError(f"record {position}: missing field '{key}'")
        if not isinstance(record[key], str):
            raise ValueError(f"record {position}: field '{key}' must be a string")
    cid = record["id"]
    if cid in seen_ids:
        raise ValueError(f"duplicate id: {cid}")
    seen_ids.add(cid)
    return Comment.from_text(
        id=cid,
        raw_text=record["text"],
        video_id=str(record.get("video_id", "") or ""),
        author_id=str(record.get("author_id", "") or ""),
    )


def ingest(path: str | Path, format: str = "jsonl") -> list[Comment]:
    """Read a comment dump into Comments, order preserved.

    ``format`` is ``"jsonl"`` (one JSON record per line) or ``"array"``
    (a flat JSON array of records). Each record needs string fields ``id``
    and ``text``; ``video_id`` and ``author_id`` default to "".
    """
    path = Path(path)
    if format not in ("jsonl", "array"):
        raise ValueError(f"unknown format: {format!r} (expected 'jsonl' or 'array')")
    text = path.read_text(encoding="utf-8")
    comments: list[Comment] = []
    seen: set[str] = set()
    if format == "array":
        if not text.strip():
            return []
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("dump is not a JSON array")
        for i, record in enumerate(data):
            comments.append(_record_to_comment(record, i, seen))
    else:
        position = 0
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"record {position} (line {lineno}): invalid JSON: {exc}") from exc
            comments.append(_record_to_comment(record, position, seen))
            position += 1
    return comments


def _data_text(name: str) -> str:
    return resources.files("attrimine.data").joinpath(name).read_text(encoding="utf-8")


def load_function_words() -> frozenset[str]:
    """Bundled English function-word list used by the heuristic filter."""
    return frozenset(t for t in _data_text("function_words.txt").split() if t)


#: Fraction of a comment's tokens that must be English function words for
#: the heuristic filter to keep it, when the filter is enabled.
DEFAULT_ENGLISH_MIN_RATIO = 0.2


def english_heuristic_filter(
    comments: Sequence[Comment],
    min_ratio: float,
    function_words: frozenset[str] | None = None,
) -> list[Comment]:
    """Keep comments whose function-word token ratio is >= ``min_ratio``.

    A crude stand-in for proper language identification: English prose
    leans heavily on function words, transliterated or non-English text
    does not. Comments without any tokens count as ratio 0.
    """
    if not 0.0 <= min_ratio <= 1.0:
        raise ValueError(f"min_ratio must be in [0, 1], got {min_ratio}")
    words = load_function_words() if function_words is None else function_words
    kept = []
    for comment in comments:
        tokens = [t for s in comment.sentences for t in s.tokens]
        ratio = sum(t in words for t in tokens) / len(tokens) if tokens else 0.0
        if ratio >= min_ratio:
            kept.append(comment)
    return kept


def compute_stats(comments: Sequence[Comment]) -> CorpusStats:
    """Count comments, sentences, positives, and per-sentence token presence."""
    df: Counter[str] = Counter()
    n_sentences = 0
    n_positive = 0
    for comment in comments:
        for sentence in comment.sentences:
            n_sentences += 1
            if sentence.is_positive:
                n_positive += 1
            df.update(set(sentence.tokens))
    return CorpusStats(
        n_comments=len(comments),
        n_sentences=n_sentences,
        n_labeled_positive_sentences=n_positive,
        document_frequency=dict(df),
    )


def load_annotations(
    comments: Sequence[Comment],
    path: str | Path,
    categories: Iterable[str],
) -> list[Comment]:
    """Attach sentence-level labels from a tab-separated label file.

    Rows are ``comment_id<TAB>sentence_index<TAB>category_id`` with the
    literal category ``NONE`` marking an explicit negative; ``#`` lines are
    comments. Returns a new annotated corpus; the input is left untouched.
    Sentences never mentioned in the file keep ``labels=None``.
    """
    known = set(categories)
    by_id = {c.id: c for c in comments}
    # labels[(comment_id, sentence_index)] -> set of category ids
    collected: dict[tuple[str, int], set[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"label row {lineno}: expected 3 tab-separated fields, got {len(fields)}")
        cid, index_str, category = (f.strip() for f in fields)
        if cid not in by_id:
            raise ValueError(f"label row {lineno}: unknown comment_id {cid!r}")
        try:
            index = int(index_str)
        except ValueError:
            raise ValueError(f"label row {lineno}: sentence_index {index_str!r} is not an integer") from None
        if not 0 <= index < len(by_id[cid].sentences):
            raise ValueError(
                f"label row {lineno}: sentence_index {index} out of range for comment {cid!r} "
                f"({len(by_id[cid].sentences)} sentences)"
            )
        bucket = collected.setdefault((cid, index), set())
        if category != "NONE":
            if category not in known:
                raise ValueError(f"label row {lineno}: unknown category_id {category!r}")
            bucket.add(category)
    annotated = []
    for comment in comments:
        sentences = tuple(
            replace(s, labels=frozenset(collected[(comment.id, s.index)]))
            if (comment.id, s.index) in collected
            else s
            for s in comment.sentences
        )
        annotated.append(replace(comment, sentences=sentences))
    return annotated
