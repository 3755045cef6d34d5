"""Scoring math for highlighted praise spans.

Token-level scores are computed from TP/FP/FN tallies:

    f1 = tp / (tp + (fp + fn) / 2)
    iou = tp / (tp + fp + fn)
    modified iou = tp / (tp + alpha * fp + fn)      alpha >= 0, default 0.2

The modified form down-weights false positives: a highlight that includes a
few extra words still tells the trainee which praise they gave, while missed
praise words do not. When tp + fp + fn == 0 (no praise predicted, none
annotated) every one of these scores is defined as exactly 1 - predicting
"no praise" on a response without praise is a perfect answer.

Two modified-IoU variants are exposed:

- token_miou: the formula above over whole-response token sets.
- span_miou: spans are first grouped into clusters (connected components of
  the pred/gold overlap graph; spans that overlap no counterpart are
  singleton clusters), each cluster is scored with token_miou over its own
  token sets, and the response score is the mean over clusters. This is the
  variant that reproduces the published worked examples and is the default
  for reports.
"""
from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .annotation import TypedSpan
from .errors import (
    DegenerateVarianceError,
    EmptyInputError,
    InvalidAlphaError,
    LengthMismatchError,
    RatingOutOfRangeError,
)
from .textcore import TokenList


@dataclass(frozen=True)
class ConfusionCounts:
    """Token tallies for one response and one praise type."""

    tp: int
    fp: int
    fn: int

    def __post_init__(self) -> None:
        if self.tp < 0 or self.fp < 0 or self.fn < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn


@dataclass(frozen=True)
class MiouConfig:
    """False-positive weight for the modified IoU; 0 tolerates extra words fully."""

    alpha: float = 0.2

    def __post_init__(self) -> None:
        if not isinstance(self.alpha, (int, float)) or math.isnan(self.alpha) or self.alpha < 0:
            raise InvalidAlphaError(f"alpha must be a real number >= 0, got {self.alpha!r}")


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float
    min: float
    max: float


def confusion_counts(pred: Iterable[int], gold: Iterable[int]) -> ConfusionCounts:
    pred, gold = set(pred), set(gold)
    return ConfusionCounts(tp=len(pred & gold), fp=len(pred - gold), fn=len(gold - pred))


def f1_score(c: ConfusionCounts) -> float:
    if c.total == 0:
        return 1.0
    return c.tp / (c.tp + 0.5 * (c.fp + c.fn))


def iou_score(c: ConfusionCounts) -> float:
    if c.total == 0:
        return 1.0
    return c.tp / c.total


def token_miou(c: ConfusionCounts, cfg: MiouConfig = MiouConfig()) -> float:
    if c.total == 0:
        return 1.0
    denominator = c.tp + cfg.alpha * c.fp + c.fn
    if denominator == 0:
        # alpha == 0 with only false positives; the alpha->0 limit is 0.
        return 0.0
    return c.tp / denominator


def span_cluster_scores(
    pred: Iterable[TypedSpan],
    gold: Iterable[TypedSpan],
    tokens: TokenList,
    cfg: MiouConfig = MiouConfig(),
) -> list[float]:
    """token_miou per cluster of the bipartite pred/gold overlap graph.

    A predicted and a gold span are linked iff they share a token index;
    clusters are the connected components, so an unmatched span on either
    side forms a singleton cluster scoring 0.
    """
    pred_sets = [set(s.indices()) for s in pred]
    gold_sets = [set(s.indices()) for s in gold]
    for indices in pred_sets + gold_sets:
        if indices and max(indices) >= len(tokens):
            raise ValueError(f"span exceeds the {len(tokens)}-token response")

    n = len(pred_sets) + len(gold_sets)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, p in enumerate(pred_sets):
        for j, g in enumerate(gold_sets):
            if p & g:
                parent[find(i)] = find(len(pred_sets) + j)

    clusters: dict[int, tuple[set[int], set[int]]] = {}
    for i in range(n):
        bucket = clusters.setdefault(find(i), (set(), set()))
        if i < len(pred_sets):
            bucket[0].update(pred_sets[i])
        else:
            bucket[1].update(gold_sets[i - len(pred_sets)])

    return [
        token_miou(confusion_counts(p, g), cfg)
        for _, (p, g) in sorted(clusters.items())
    ]


def mean_cluster_score(scores: Sequence[float]) -> float:
    """Mean over cluster scores; an empty cluster list means perfect agreement."""
    if not scores:
        return 1.0
    # fsum keeps the mean independent of cluster enumeration order.
    return math.fsum(scores) / len(scores)


def span_miou(
    pred: Iterable[TypedSpan],
    gold: Iterable[TypedSpan],
    tokens: TokenList,
    cfg: MiouConfig = MiouConfig(),
) -> float:
    return mean_cluster_score(span_cluster_scores(pred, gold, tokens, cfg))


def cohen_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """Chance-corrected agreement between two equal-length label sequences."""
    if len(a) != len(b):
        raise LengthMismatchError(f"sequences differ in length: {len(a)} vs {len(b)}")
    if not a:
        raise LengthMismatchError("need at least one paired label")
    n = len(a)
    observed = sum(1 for x, y in zip(a, b) if x == y) / n
    counts_a, counts_b = Counter(a), Counter(b)
    expected = sum(counts_a[label] * counts_b.get(label, 0) for label in counts_a) / (n * n)
    if expected == 1.0:
        # Both raters constant on the same label; they agree perfectly.
        return 1.0
    return (observed - expected) / (1.0 - expected)


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise LengthMismatchError(f"sequences differ in length: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise LengthMismatchError("need at least two paired values")
    mean_x = math.fsum(xs) / len(xs)
    mean_y = math.fsum(ys) / len(ys)
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0 or var_y == 0:
        raise DegenerateVarianceError("correlation undefined for a constant sequence")
    r = math.fsum(px * py for px, py in zip(dx, dy)) / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))


def normalize_likert(rating: int) -> float:
    """Map a 1..5 rating linearly onto [0, 1]."""
    if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
        raise RatingOutOfRangeError(f"rating must be an integer in 1..5, got {rating!r}")
    return (rating - 1) / 4


def aggregate(scores: Sequence[float]) -> SummaryStats:
    """Mean / population std / min / max over a non-empty score sequence."""
    if not scores:
        raise EmptyInputError("cannot aggregate zero scores")
    mean = statistics.fmean(scores)
    return SummaryStats(
        mean=mean,
        std=statistics.pstdev(scores, mu=mean),
        min=min(scores),
        max=max(scores),
    )
