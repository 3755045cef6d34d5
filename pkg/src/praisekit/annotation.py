"""Praise-span data model, IO label encoding, corpus ingestion, and stats.

A corpus is one JSON object per line:

    {"id": "r1", "text": "Great job, Kevin!",
     "gold": [{"type": "outcome", "char_start": 0, "char_end": 9}]}

Gold spans are stored as character offsets (phrase strings would be ambiguous
when a phrase repeats) and resolved to whole-token spans at load time. Offsets
that cut through a token are widened to the full token with a SpanSnapWarning.
"""
from __future__ import annotations

import enum
import io
import json
import warnings
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Iterator, Literal, Mapping

from .errors import (
    DuplicateIdError,
    MalformedRecordError,
    MissingPredictionError,
    UnknownPraiseTypeError,
)
from .textcore import TokenList, tokenize


class PraiseType(enum.Enum):
    EFFORT = "effort"
    OUTCOME = "outcome"


class PraiseLabel(enum.Enum):
    O = "O"
    I_EFFORT = "I_Effort"
    I_OUTCOME = "I_Outcome"


_INSIDE = {PraiseType.EFFORT: PraiseLabel.I_EFFORT, PraiseType.OUTCOME: PraiseLabel.I_OUTCOME}
_SPAN_TYPE = {PraiseLabel.I_EFFORT: PraiseType.EFFORT, PraiseLabel.I_OUTCOME: PraiseType.OUTCOME}


class SpanSnapWarning(UserWarning):
    """A gold char range cut through a token and was widened outward."""


@dataclass(frozen=True)
class TypedSpan:
    """Half-open token-index interval [start, end) tagged with a praise type."""

    praise_type: PraiseType
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"span [{self.start}, {self.end}) must be non-empty and non-negative")

    def indices(self) -> range:
        return range(self.start, self.end)

    def __len__(self) -> int:
        return self.end - self.start


def span_sort_key(span: TypedSpan) -> tuple[int, int, str]:
    return (span.start, span.end, span.praise_type.value)


def _check_spans(
    spans: Iterable[TypedSpan],
    tokens: TokenList,
    *,
    require_disjoint_per_type: bool,
) -> frozenset[TypedSpan]:
    spans = frozenset(spans)
    for span in spans:
        if span.end > len(tokens):
            raise ValueError(f"span [{span.start}, {span.end}) exceeds {len(tokens)} tokens")
    if require_disjoint_per_type:
        for ptype in PraiseType:
            covered: set[int] = set()
            for span in sorted((s for s in spans if s.praise_type is ptype), key=span_sort_key):
                if covered & set(span.indices()):
                    raise ValueError(f"overlapping {ptype.value} spans")
                covered.update(span.indices())
    return spans


@dataclass(frozen=True)
class AnnotatedResponse:
    id: str
    text: str
    tokens: TokenList
    gold: frozenset[TypedSpan]
    predicted: frozenset[TypedSpan] | None = None


def annotate(
    response_id: str,
    text: str,
    gold: Iterable[TypedSpan] = (),
    predicted: Iterable[TypedSpan] | None = None,
) -> AnnotatedResponse:
    """Build an AnnotatedResponse, tokenizing text and validating spans.

    Gold spans of one type must be pairwise disjoint; predicted spans may
    overlap (models do emit overlapping phrases).
    """
    tokens = tokenize(text)
    gold_set = _check_spans(gold, tokens, require_disjoint_per_type=True)
    predicted_set = None
    if predicted is not None:
        predicted_set = _check_spans(predicted, tokens, require_disjoint_per_type=False)
    return AnnotatedResponse(id=response_id, text=text, tokens=tokens, gold=gold_set, predicted=predicted_set)


def with_predicted(response: AnnotatedResponse, predicted: Iterable[TypedSpan]) -> AnnotatedResponse:
    return replace(
        response,
        predicted=_check_spans(predicted, response.tokens, require_disjoint_per_type=False),
    )


@dataclass(frozen=True)
class Corpus:
    responses: tuple[AnnotatedResponse, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for response in self.responses:
            if response.id in seen:
                raise DuplicateIdError(f"duplicate response id {response.id!r}")
            seen.add(response.id)

    def __len__(self) -> int:
        return len(self.responses)

    def __iter__(self) -> Iterator[AnnotatedResponse]:
        return iter(self.responses)

    def __getitem__(self, index: int) -> AnnotatedResponse:
        return self.responses[index]

    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.responses)

    def by_id(self, response_id: str) -> AnnotatedResponse:
        for response in self.responses:
            if response.id == response_id:
                return response
        raise KeyError(response_id)


def resolve_char_span(tokens: TokenList, praise_type: PraiseType, char_start: int, char_end: int) -> TypedSpan:
    """Map a character range onto whole tokens, snapping outward if it cuts one."""
    if char_start < 0 or char_end <= char_start:
        raise MalformedRecordError(f"bad char range [{char_start}, {char_end})")
    covered = [t for t in tokens if t.char_start < char_end and t.char_end > char_start]
    if not covered:
        raise MalformedRecordError(f"char range [{char_start}, {char_end}) covers no tokens")
    if covered[0].char_start < char_start or covered[-1].char_end > char_end:
        warnings.warn(
            SpanSnapWarning(
                f"char range [{char_start}, {char_end}) cut a token; "
                f"snapped to tokens [{covered[0].index}, {covered[-1].index + 1})"
            )
        )
    return TypedSpan(praise_type=praise_type, start=covered[0].index, end=covered[-1].index + 1)


def _parse_praise_type(raw: object) -> PraiseType:
    if not isinstance(raw, str):
        raise MalformedRecordError(f"span type must be a string, got {type(raw).__name__}")
    try:
        return PraiseType(raw.lower())
    except ValueError:
        raise UnknownPraiseTypeError(f"unknown praise type {raw!r} (expected effort or outcome)") from None


def _iter_lines(source: IO[bytes] | IO[str] | Iterable[str] | str) -> Iterator[str]:
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line


def load_corpus(source: IO[bytes] | IO[str] | Iterable[str] | str) -> Corpus:
    """Read a line-delimited corpus; see the module docstring for the schema."""
    responses = []
    for lineno, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(f"line {lineno}: invalid JSON: {exc}") from None
        if not isinstance(record, dict):
            raise MalformedRecordError(f"line {lineno}: expected an object")
        response_id = record.get("id")
        text = record.get("text")
        gold_raw = record.get("gold")
        if not isinstance(response_id, str) or not isinstance(text, str) or not isinstance(gold_raw, list):
            raise MalformedRecordError(f"line {lineno}: need string id, string text, and gold list")
        tokens = tokenize(text)
        spans = []
        for entry in gold_raw:
            if not isinstance(entry, dict):
                raise MalformedRecordError(f"line {lineno}: gold entries must be objects")
            ptype = _parse_praise_type(entry.get("type"))
            char_start, char_end = entry.get("char_start"), entry.get("char_end")
            if not isinstance(char_start, int) or not isinstance(char_end, int):
                raise MalformedRecordError(f"line {lineno}: char_start/char_end must be integers")
            spans.append(resolve_char_span(tokens, ptype, char_start, char_end))
        try:
            responses.append(annotate(response_id, text, gold=spans))
        except ValueError as exc:
            raise MalformedRecordError(f"line {lineno}: {exc}") from None
    return Corpus(tuple(responses))


def load_corpus_file(path) -> Corpus:
    with open(path, "rb") as handle:
        return load_corpus(handle)


def dump_corpus(corpus: Corpus, sink: IO[str]) -> int:
    """Write the line-delimited corpus format; returns the record count."""
    count = 0
    for response in corpus:
        gold = [
            {
                "type": span.praise_type.value,
                "char_start": response.tokens[span.start].char_start,
                "char_end": response.tokens[span.end - 1].char_end,
            }
            for span in sorted(response.gold, key=span_sort_key)
        ]
        record = {"id": response.id, "text": response.text, "gold": gold}
        sink.write(json.dumps(record, ensure_ascii=False) + "\n")
        count += 1
    return count


WhichSpans = Literal["gold", "predicted"]


def _span_set(response: AnnotatedResponse, which: WhichSpans) -> frozenset[TypedSpan]:
    if which == "gold":
        return response.gold
    if which == "predicted":
        if response.predicted is None:
            raise MissingPredictionError(f"response {response.id!r} has no predicted spans")
        return response.predicted
    raise ValueError(f"which must be 'gold' or 'predicted', got {which!r}")


def to_io_labels(response: AnnotatedResponse, which: WhichSpans = "gold") -> list[PraiseLabel]:
    """One label per token: I_Effort / I_Outcome inside a span, O outside.

    Effort takes precedence when spans of both types cover one token — the
    three-label scheme cannot represent the overlap, and effort is the
    category the training pushes toward.
    """
    spans = _span_set(response, which)
    labels = [PraiseLabel.O] * len(response.tokens)
    for ptype in (PraiseType.OUTCOME, PraiseType.EFFORT):
        for span in spans:
            if span.praise_type is ptype:
                for i in span.indices():
                    labels[i] = _INSIDE[ptype]
    return labels


def from_io_labels(labels: Iterable[PraiseLabel]) -> frozenset[TypedSpan]:
    """Recover spans as maximal runs of one inside label."""
    spans = []
    run_start = None
    run_label = PraiseLabel.O
    for i, label in enumerate(list(labels) + [PraiseLabel.O]):
        if label is run_label:
            continue
        if run_label is not PraiseLabel.O:
            spans.append(TypedSpan(_SPAN_TYPE[run_label], run_start, i))
        run_start, run_label = i, label
    return frozenset(spans)


@dataclass(frozen=True)
class LabelDistribution:
    """Per-label token counts; the shape of the published distribution table."""

    counts: Mapping[PraiseLabel, int]
    total: int

    def percentage(self, label: PraiseLabel) -> float:
        if self.total == 0:
            return 0.0
        return 100.0 * self.counts[label] / self.total


def label_distribution(corpus: Corpus, which: WhichSpans = "gold") -> LabelDistribution:
    counts = {label: 0 for label in PraiseLabel}
    total = 0
    for response in corpus:
        for label in to_io_labels(response, which):
            counts[label] += 1
            total += 1
    return LabelDistribution(counts=counts, total=total)


def render_label_table(dist: LabelDistribution, title: str = "Tokens") -> str:
    lines = [f"{title:<12}  {'Count':>8}  {'%':>8}"]
    for label in PraiseLabel:
        lines.append(f"{label.value:<12}  {dist.counts[label]:>8d}  {dist.percentage(label):>8.2f}")
    lines.append(f"{'Total':<12}  {dist.total:>8d}  {100.0 if dist.total else 0.0:>8.2f}")
    if dist.total == 0:
        lines.append("(empty corpus: zero tokens)")
    return "\n".join(lines)
