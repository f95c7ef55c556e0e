"""Detection and resolution metrics, rater agreement, and report rendering.

Degenerate metrics are reported as None ("undefined") rather than silently
collapsed to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Comment


@dataclass(frozen=True)
class DetectionOutcome:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_predictions(cls, predicted: Sequence[bool], truth: Sequence[bool]) -> "DetectionOutcome":
        if len(predicted) != len(truth):
            raise ValueError("predicted and truth lengths differ")
        tp = sum(p and t for p, t in zip(predicted, truth))
        fp = sum(p and not t for p, t in zip(predicted, truth))
        tn = sum(not p and not t for p, t in zip(predicted, truth))
        fn = sum(not p and t for p, t in zip(predicted, truth))
        return cls(tp=tp, fp=fp, tn=tn, fn=fn)


@dataclass(frozen=True)
class DetectionMetrics:
    precision: float | None
    recall: float | None
    accuracy: float | None
    f1: float | None


def detection_metrics(outcome: DetectionOutcome) -> DetectionMetrics:
    """Standard precision/recall/accuracy/F1 with undefined cases flagged as None."""
    precision = outcome.tp / (outcome.tp + outcome.fp) if outcome.tp + outcome.fp > 0 else None
    recall = outcome.tp / (outcome.tp + outcome.fn) if outcome.tp + outcome.fn > 0 else None
    accuracy = (outcome.tp + outcome.tn) / outcome.total if outcome.total > 0 else None
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return DetectionMetrics(precision=precision, recall=recall, accuracy=accuracy, f1=f1)


@dataclass(frozen=True)
class ResolutionOutcome:
    n_evaluated: int
    n_correct_topk: dict[int, int]

    @property
    def n_correct_top1(self) -> int:
        return self.n_correct_topk[1]

    def accuracy(self, k: int) -> float | None:
        if self.n_evaluated == 0:
            return None
        return self.n_correct_topk[k] / self.n_evaluated


def resolution_eval(
    predictions: Sequence[Sequence[str]],
    ground_truth: Sequence[Iterable[str]],
    ks: Iterable[int] = (1, 3),
) -> ResolutionOutcome:
    """Set-membership resolution over ground-truth-positive sentences.

    ``predictions`` are ranked category lists; a sentence is correct at k
    iff any of its first k predicted categories is in its truth set. Every
    evaluated sentence must have a nonempty truth set; negatives belong to
    detection, not resolution.
    """
    if len(predictions) != len(ground_truth):
        raise ValueError("predictions and ground_truth lengths differ")
    ks = sorted(set(ks) | {1})
    correct = {k: 0 for k in ks}
    for i, (ranked, truth) in enumerate(zip(predictions, ground_truth)):
        truth = set(truth)
        if not truth:
            raise ValueError(f"sentence {i}: empty ground-truth factor set (resolution needs positives)")
        for k in ks:
            if any(c in truth for c in ranked[:k]):
                correct[k] += 1
    return ResolutionOutcome(n_evaluated=len(predictions), n_correct_topk=correct)


def fleiss_kappa(ratings) -> float | None:
    """Fleiss' kappa over an items x categories count matrix.

    Every item must carry the same number of ratings (R >= 2) across at
    least two categories. Returns None when expected agreement is 1 (all
    raters always pick one category), where kappa is undefined.
    """
    table = np.asarray(ratings, dtype=np.float64)
    if table.ndim != 2:
        raise ValueError("ratings must be a 2-D items x categories matrix")
    n_items, n_categories = table.shape
    if n_items < 1 or n_categories < 2:
        raise ValueError("need at least 1 item and 2 categories")
    if np.any(table < 0) or np.any(table != np.floor(table)):
        raise ValueError("ratings must be non-negative integer counts")
    row_sums = table.sum(axis=1)
    r = row_sums[0]
    if np.any(row_sums != r):
        raise ValueError("every item must be rated by the same number of raters")
    if r < 2:
        raise ValueError("need at least 2 raters per item")
    p_i = (np.sum(table * table, axis=1) - r) / (r * (r - 1))
    p_bar = float(p_i.mean())
    proportions = table.sum(axis=0) / (n_items * r)
    p_e = float(proportions @ proportions)
    if p_e == 1.0:
        return None
    return (p_bar - p_e) / (1.0 - p_e)


def category_breakdown(
    comments: Sequence[Comment],
    categories: Iterable[str],
) -> dict[str, tuple[int, float | None]]:
    """Positive sentence count and share per broad category.

    Multi-label sentences count once per label; shares are over total
    positive labels and None when there are no positives at all.
    """
    counts = {c: 0 for c in categories}
    for comment in comments:
        for sentence in comment.sentences:
            for label in sentence.labels or ():
                if label not in counts:
                    raise ValueError(f"label {label!r} not in the supplied category set")
                counts[label] += 1
    total = sum(counts.values())
    return {
        c: (n, n / total if total > 0 else None)
        for c, n in counts.items()
    }


# ---------------------------------------------------------------------------
# report rendering


def joint_resolution_metrics(
    truth_positive: Sequence[bool],
    detected: Sequence[bool],
    topk_hit: Sequence[bool],
) -> tuple[float | None, float | None, float | None]:
    """Precision/recall/F1 for combined detect-and-resolve at some k.

    A true positive is a detected, truth-positive sentence whose top-k
    categories hit the truth set; any other detection is a false positive.
    This backs the precision/recall rows of the resolution report columns;
    resolution accuracy itself stays over truth positives only.
    """
    tp = sum(d and t and h for t, d, h in zip(truth_positive, detected, topk_hit))
    n_detected = sum(detected)
    n_positive = sum(truth_positive)
    precision = tp / n_detected if n_detected > 0 else None
    recall = tp / n_positive if n_positive > 0 else None
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def _cell(value: float | None) -> str:
    return "undef" if value is None else f"{100.0 * value:.2f}"


def format_report(columns: Mapping[str, Mapping[str, float | None]]) -> str:
    """Render the metrics table as aligned text.

    ``columns`` maps column name (e.g. Detection, Resolution,
    Resolution+top3) to a row dict over precision/recall/accuracy/f1.
    Values are proportions; cells print as percentages.
    """
    names = list(columns)
    width = max(12, *(len(n) for n in names)) + 2
    header = f"{'':<10}" + "".join(f"{n:>{width}}" for n in names)
    rows = []
    for row_name in ("precision", "recall", "accuracy", "f1"):
        label = row_name.capitalize() if row_name != "f1" else "F1"
        cells = "".join(f"{_cell(columns[n].get(row_name)):>{width}}" for n in names)
        rows.append(f"{label:<10}" + cells)
    return "\n".join([header, *rows]) + "\n"


def metrics_keyvalues(columns: Mapping[str, Mapping[str, float | None]]) -> dict[str, float | None]:
    """Flatten the report into machine-readable dotted keys."""
    flat = {}
    for column, rows in columns.items():
        key = column.lower().replace(" ", "_").replace("+", "_")
        for row_name, value in rows.items():
            flat[f"{key}.{row_name}"] = value
    return flat
