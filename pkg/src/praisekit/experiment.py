"""Experiment protocol: splits, training-size partitions, fine-tuning data,
batch evaluation against gold spans, and correlation with human ratings.

Everything seeded is deterministic: the same corpus, seed, and fixtures give
byte-identical results, and every seed is an explicit integer that ends up in
the reports.
"""
from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from .annotation import AnnotatedResponse, Corpus, PraiseType, span_sort_key
from .errors import (
    CorpusTooSmallError,
    EmptyGroupError,
    InsufficientOverlapError,
    MalformedRecordError,
    PraiseKitError,
    SizeExceedsTrainError,
)
from .llm import ChatClient, ChatMessage, conversation_prefix, extract_praise, phrase_token_count
from .metrics import (
    ConfusionCounts,
    MiouConfig,
    SummaryStats,
    aggregate,
    confusion_counts,
    f1_score,
    iou_score,
    mean_cluster_score,
    normalize_likert,
    pearson_r,
    span_cluster_scores,
    token_miou,
)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")


def split_train_test(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Seeded uniform shuffle, then prefix split.

    The train size is round-half-up of fraction * corpus size, so a 50%
    split of an odd-sized corpus puts the extra response in training
    (129 -> 65 train / 64 test).
    """
    if len(corpus) < 2:
        raise CorpusTooSmallError(f"need at least 2 responses to split, got {len(corpus)}")
    train_size = math.floor(spec.train_fraction * len(corpus) + 0.5)
    order = list(corpus.responses)
    random.Random(spec.seed).shuffle(order)
    return Corpus(tuple(order[:train_size])), Corpus(tuple(order[train_size:]))


@dataclass(frozen=True)
class PartitionPlan:
    sizes: tuple[int, ...]
    seeds_per_size: int = 5
    base_seed: int = 0

    def __post_init__(self) -> None:
        if self.seeds_per_size < 1:
            raise ValueError("seeds_per_size must be >= 1")
        if any(size < 1 for size in self.sizes):
            raise ValueError("partition sizes must be >= 1")

    def seeds(self) -> range:
        return range(self.base_seed, self.base_seed + self.seeds_per_size)


@dataclass(frozen=True)
class Partition:
    size: int
    seed: int
    subset: Corpus


def make_partitions(train: Corpus, plan: PartitionPlan) -> list[Partition]:
    """One seeded sample without replacement per (size, seed) pair.

    The same seed set is reused across sizes; subsets keep the training
    corpus order, so a full-size sample equals the training set exactly.
    """
    oversized = [size for size in plan.sizes if size > len(train)]
    if oversized:
        raise SizeExceedsTrainError(f"sizes {oversized} exceed the {len(train)}-response training set")
    partitions = []
    for size in plan.sizes:
        for seed in plan.seeds():
            rng = random.Random(f"{seed}:{size}")
            picked = sorted(rng.sample(range(len(train)), size))
            subset = Corpus(tuple(train.responses[i] for i in picked))
            partitions.append(Partition(size=size, seed=seed, subset=subset))
    return partitions


def gold_phrases(response: AnnotatedResponse, praise_type: PraiseType) -> list[str]:
    """Surface text of the gold spans of one type, in span order."""
    spans = sorted((s for s in response.gold if s.praise_type is praise_type), key=span_sort_key)
    return [response.tokens.span_surface(s.start, s.end) for s in spans]


def finetune_record(response: AnnotatedResponse) -> dict:
    """The full prompting conversation plus a gold assistant turn."""
    target = json.dumps(
        {
            "effort": gold_phrases(response, PraiseType.EFFORT),
            "outcome": gold_phrases(response, PraiseType.OUTCOME),
        },
        ensure_ascii=False,
    )
    messages = conversation_prefix() + (
        ChatMessage("user", response.text),
        ChatMessage("assistant", target),
    )
    return {"messages": [{"role": m.role, "content": m.content} for m in messages]}


def emit_finetune_dataset(partition: Corpus, sink: IO[str]) -> int:
    """Write one fine-tuning conversation per response; returns the count."""
    count = 0
    for response in partition:
        sink.write(json.dumps(finetune_record(response), ensure_ascii=False) + "\n")
        count += 1
    return count


@dataclass(frozen=True)
class ScoreRecord:
    response_id: str
    praise_type: PraiseType
    span_miou: float
    token_miou: float
    f1: float
    iou: float


@dataclass(frozen=True)
class EvaluationFailure:
    response_id: str
    error: str


@dataclass(frozen=True)
class EvaluationResult:
    records: tuple[ScoreRecord, ...]
    failures: tuple[EvaluationFailure, ...]


def score_response(
    response: AnnotatedResponse,
    spans: Iterable,
    failures: Sequence[tuple[PraiseType, str]],
    cfg: MiouConfig,
) -> list[ScoreRecord]:
    """All four scores for each praise type of one response.

    Unlocatable (hallucinated) phrases each contribute a zero-scoring
    singleton cluster to the span score and their token count to the
    false positives of the token-level counts.
    """
    spans = list(spans)
    records = []
    for ptype in PraiseType:
        pred = [s for s in spans if s.praise_type is ptype]
        gold = [s for s in response.gold if s.praise_type is ptype]
        missed_phrases = [phrase for ftype, phrase in failures if ftype is ptype]

        cluster_scores = span_cluster_scores(pred, gold, response.tokens, cfg)
        cluster_scores.extend(0.0 for _ in missed_phrases)
        span_score = mean_cluster_score(cluster_scores)

        pred_tokens = {i for s in pred for i in s.indices()}
        gold_tokens = {i for s in gold for i in s.indices()}
        counts = confusion_counts(pred_tokens, gold_tokens)
        hallucinated = sum(phrase_token_count(p) for p in missed_phrases)
        if hallucinated:
            counts = ConfusionCounts(counts.tp, counts.fp + hallucinated, counts.fn)

        records.append(
            ScoreRecord(
                response_id=response.id,
                praise_type=ptype,
                span_miou=span_score,
                token_miou=token_miou(counts, cfg),
                f1=f1_score(counts),
                iou=iou_score(counts),
            )
        )
    return records


def run_evaluation(
    client: ChatClient,
    test: Corpus,
    cfg: MiouConfig = MiouConfig(),
    max_workers: int = 1,
) -> EvaluationResult:
    """Extract and score every response; failures are collected, not fatal.

    Records come back in corpus order regardless of worker count, so replay
    runs are bit-reproducible.
    """
    def evaluate_one(response: AnnotatedResponse):
        try:
            report = extract_praise(client, response)
        except PraiseKitError as exc:
            return None, EvaluationFailure(response_id=response.id, error=str(exc))
        return score_response(response, report.spans, report.failures, cfg), None

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(evaluate_one, test.responses))
    else:
        outcomes = [evaluate_one(response) for response in test.responses]

    records: list[ScoreRecord] = []
    failures: list[EvaluationFailure] = []
    for scored, failure in outcomes:
        if failure is not None:
            failures.append(failure)
        else:
            records.extend(scored)
    return EvaluationResult(records=tuple(records), failures=tuple(failures))


@dataclass(frozen=True)
class RunReportRow:
    size: int
    praise_type: PraiseType
    stats: SummaryStats
    seed_means: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class RunReport:
    rows: tuple[RunReportRow, ...]


def summarize_runs(grouped: Mapping[tuple[int, int], Sequence[ScoreRecord]]) -> RunReport:
    """Aggregate seed-level mean span scores into per-(size, type) stats.

    grouped maps (training size, seed) to the score records of that run.
    """
    by_size: dict[int, dict[int, Sequence[ScoreRecord]]] = {}
    for (size, seed), records in grouped.items():
        if not records:
            raise EmptyGroupError(f"no records for size {size}, seed {seed}")
        by_size.setdefault(size, {})[seed] = records

    rows = []
    for size in sorted(by_size):
        for ptype in PraiseType:
            seed_means = []
            for seed in sorted(by_size[size]):
                scores = [r.span_miou for r in by_size[size][seed] if r.praise_type is ptype]
                if not scores:
                    raise EmptyGroupError(f"no {ptype.value} records for size {size}, seed {seed}")
                seed_means.append((seed, math.fsum(scores) / len(scores)))
            rows.append(
                RunReportRow(
                    size=size,
                    praise_type=ptype,
                    stats=aggregate([mean for _, mean in seed_means]),
                    seed_means=tuple(seed_means),
                )
            )
    return RunReport(rows=tuple(rows))


_STAT_COLUMNS = ("Mean", "Std.", "Min.", "Max.")


def _stat_cells(stats: SummaryStats) -> list[str]:
    return [f"{value:.2f}" for value in (stats.mean, stats.std, stats.min, stats.max)]


def render_stats_table(rows: Sequence[tuple[str, Mapping[PraiseType, SummaryStats]]], label: str = "Training size") -> str:
    """Plain-text table with Mean/Std./Min./Max. per praise type."""
    header_1 = [label.ljust(14)] + [p.value.capitalize().ljust(27) for p in PraiseType]
    header_2 = ["".ljust(14)] + ["  ".join(c.rjust(5) for c in _STAT_COLUMNS).ljust(27) for _ in PraiseType]
    lines = ["  ".join(header_1).rstrip(), "  ".join(header_2).rstrip()]
    for name, per_type in rows:
        cells = [name.ljust(14)]
        for ptype in PraiseType:
            cells.append("  ".join(c.rjust(5) for c in _stat_cells(per_type[ptype])).ljust(27))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def render_run_report(report: RunReport) -> str:
    sizes: dict[int, dict[PraiseType, SummaryStats]] = {}
    for row in report.rows:
        sizes.setdefault(row.size, {})[row.praise_type] = row.stats
    return render_stats_table([(str(size), per_type) for size, per_type in sorted(sizes.items())])


def summarize_scores(records: Sequence[ScoreRecord]) -> dict[PraiseType, SummaryStats]:
    """Per-type stats over the span scores of one evaluation run."""
    summary = {}
    for ptype in PraiseType:
        scores = [r.span_miou for r in records if r.praise_type is ptype]
        if not scores:
            raise EmptyGroupError(f"no {ptype.value} records to summarize")
        summary[ptype] = aggregate(scores)
    return summary


# -- human ratings -------------------------------------------------------------

RATINGS_HEADER = ("response_id", "coder_id", "effort_rating", "outcome_rating")


@dataclass(frozen=True)
class RatingRecord:
    response_id: str
    coder_id: str
    effort_rating: int
    outcome_rating: int

    def rating(self, praise_type: PraiseType) -> int:
        return self.effort_rating if praise_type is PraiseType.EFFORT else self.outcome_rating


def read_ratings(source: IO[str] | Iterable[str]) -> tuple[RatingRecord, ...]:
    """Parse the ratings CSV (header: response_id,coder_id,effort_rating,outcome_rating)."""
    reader = csv.DictReader(source)
    if reader.fieldnames is None or tuple(reader.fieldnames) != RATINGS_HEADER:
        raise MalformedRecordError(
            f"ratings header must be {','.join(RATINGS_HEADER)}, got {reader.fieldnames}"
        )
    records = []
    for row in reader:
        try:
            effort = int(row["effort_rating"])
            outcome = int(row["outcome_rating"])
        except (TypeError, ValueError):
            raise MalformedRecordError(f"non-integer rating in row {row}") from None
        normalize_likert(effort)
        normalize_likert(outcome)
        records.append(
            RatingRecord(
                response_id=row["response_id"],
                coder_id=row["coder_id"],
                effort_rating=effort,
                outcome_rating=outcome,
            )
        )
    return tuple(records)


AVERAGE_CODER = "average"


@dataclass(frozen=True)
class CorrelationCell:
    praise_type: PraiseType
    coder_id: str  # a coder, or AVERAGE_CODER for the coders' mean rating
    pearson: float
    normalized_mean: float
    n: int


@dataclass(frozen=True)
class CorrelationReport:
    cells: tuple[CorrelationCell, ...]

    def cell(self, praise_type: PraiseType, coder_id: str) -> CorrelationCell:
        for cell in self.cells:
            if cell.praise_type is praise_type and cell.coder_id == coder_id:
                return cell
        raise KeyError((praise_type, coder_id))


def correlate_ratings(
    scores: Sequence[ScoreRecord],
    ratings: Sequence[RatingRecord],
) -> CorrelationReport:
    """Pearson's r between span scores and normalized ratings, per type and coder.

    Joined on response_id; each cell needs at least two joined rows. The
    AVERAGE_CODER cell correlates against the mean of the coders' normalized
    ratings per response.
    """
    cells = []
    for ptype in PraiseType:
        score_by_id = {r.response_id: r.span_miou for r in scores if r.praise_type is ptype}
        coders = sorted({r.coder_id for r in ratings})
        normalized: dict[str, dict[str, float]] = {coder: {} for coder in coders}
        for record in ratings:
            if record.response_id in score_by_id:
                normalized[record.coder_id][record.response_id] = normalize_likert(record.rating(ptype))

        for coder in coders:
            joined = sorted(normalized[coder].items())
            if len(joined) < 2:
                raise InsufficientOverlapError(
                    f"coder {coder!r}, type {ptype.value}: {len(joined)} joined rows (need >= 2)"
                )
            xs = [score_by_id[rid] for rid, _ in joined]
            ys = [value for _, value in joined]
            cells.append(
                CorrelationCell(
                    praise_type=ptype,
                    coder_id=coder,
                    pearson=pearson_r(xs, ys),
                    normalized_mean=math.fsum(ys) / len(ys),
                    n=len(ys),
                )
            )

        averaged: dict[str, list[float]] = {}
        for coder in coders:
            for rid, value in normalized[coder].items():
                averaged.setdefault(rid, []).append(value)
        joined = sorted((rid, math.fsum(vs) / len(vs)) for rid, vs in averaged.items())
        if len(joined) < 2:
            raise InsufficientOverlapError(
                f"type {ptype.value}: {len(joined)} joined rows for the coder average"
            )
        xs = [score_by_id[rid] for rid, _ in joined]
        ys = [value for _, value in joined]
        cells.append(
            CorrelationCell(
                praise_type=ptype,
                coder_id=AVERAGE_CODER,
                pearson=pearson_r(xs, ys),
                normalized_mean=math.fsum(ys) / len(ys),
                n=len(ys),
            )
        )
    return CorrelationReport(cells=tuple(cells))


def render_correlation_report(report: CorrelationReport) -> str:
    lines = [f"{'Coder':<12}  {'Type':<8}  {'Pearson r':>9}  {'Norm. mean':>10}  {'n':>4}"]
    for cell in report.cells:
        lines.append(
            f"{cell.coder_id:<12}  {cell.praise_type.value:<8}  "
            f"{cell.pearson:>9.3f}  {cell.normalized_mean:>10.3f}  {cell.n:>4d}"
        )
    return "\n".join(lines)
