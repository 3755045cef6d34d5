"""Templated explanatory feedback and highlight markup for trainees.

The verdict decides the template: any effort span earns an affirmation; only
outcome spans earn the reframing message that quotes the outcome phrase and
asks the trainee to try again; no spans at all earns guidance toward
specific, effort-focused praise. Wording lives in editable text files (one
per verdict) so course staff can tune it without touching code.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .annotation import AnnotatedResponse, PraiseType, TypedSpan, span_sort_key


class Verdict(enum.Enum):
    EFFORT_PRAISED = "EffortPraised"
    OUTCOME_ONLY = "OutcomeOnly"
    NO_PRAISE_FOUND = "NoPraiseFound"


@dataclass(frozen=True)
class FeedbackMessage:
    verdict: Verdict
    body: str
    cited_spans: tuple[tuple[PraiseType, str], ...]


@dataclass(frozen=True)
class Segment:
    text: str
    style: str  # "plain", "effort", or "outcome"


@dataclass(frozen=True)
class HighlightMarkup:
    segments: tuple[Segment, ...]

    def text(self) -> str:
        return "".join(segment.text for segment in self.segments)


_TEMPLATE_FILES = {
    Verdict.EFFORT_PRAISED: "effort_praised.txt",
    Verdict.OUTCOME_ONLY: "outcome_only.txt",
    Verdict.NO_PRAISE_FOUND: "no_praise_found.txt",
}


def load_templates(directory: str | Path | None = None) -> dict[Verdict, str]:
    """Read the wording files; defaults to the bundled templates."""
    if directory is None:
        from .bundled import template_dir

        directory = template_dir()
    directory = Path(directory)
    templates = {}
    for verdict, filename in _TEMPLATE_FILES.items():
        templates[verdict] = (directory / filename).read_text(encoding="utf-8").strip()
    return templates


def compose_feedback(
    spans: Iterable[TypedSpan],
    response: AnnotatedResponse,
    templates: Mapping[Verdict, str] | None = None,
) -> FeedbackMessage:
    if templates is None:
        templates = load_templates()
    spans = sorted(spans, key=span_sort_key)
    surfaces = {
        ptype: [
            response.tokens.span_surface(s.start, s.end)
            for s in spans
            if s.praise_type is ptype
        ]
        for ptype in PraiseType
    }
    effort, outcome = surfaces[PraiseType.EFFORT], surfaces[PraiseType.OUTCOME]
    if effort:
        body = templates[Verdict.EFFORT_PRAISED].format(effort_phrases='", "'.join(effort))
        cited = tuple((PraiseType.EFFORT, phrase) for phrase in effort)
        return FeedbackMessage(verdict=Verdict.EFFORT_PRAISED, body=body, cited_spans=cited)
    if outcome:
        body = templates[Verdict.OUTCOME_ONLY].format(outcome_phrase=outcome[0])
        cited = tuple((PraiseType.OUTCOME, phrase) for phrase in outcome)
        return FeedbackMessage(verdict=Verdict.OUTCOME_ONLY, body=body, cited_spans=cited)
    return FeedbackMessage(verdict=Verdict.NO_PRAISE_FOUND, body=templates[Verdict.NO_PRAISE_FOUND], cited_spans=())


def render_highlight_markup(response: AnnotatedResponse, spans: Iterable[TypedSpan]) -> HighlightMarkup:
    """Partition the response text into styled segments.

    Characters between two tokens of one span (spaces, punctuation) inherit
    that span's style; effort wins where spans of both types overlap.
    """
    styles = ["plain"] * len(response.text)
    for ptype in (PraiseType.OUTCOME, PraiseType.EFFORT):
        for span in spans:
            if span.praise_type is ptype:
                lo = response.tokens[span.start].char_start
                hi = response.tokens[span.end - 1].char_end
                for i in range(lo, hi):
                    styles[i] = ptype.value
    segments = []
    start = 0
    for i in range(1, len(response.text) + 1):
        if i == len(response.text) or styles[i] != styles[start]:
            segments.append(Segment(text=response.text[start:i], style=styles[start]))
            start = i
    return HighlightMarkup(segments=tuple(segments))
