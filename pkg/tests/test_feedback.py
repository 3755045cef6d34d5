from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from praisekit.annotation import PraiseType, annotate
from praisekit.feedback import (
    Verdict,
    compose_feedback,
    load_templates,
    render_highlight_markup,
)
from praisekit.textcore import tokenize

from .conftest import effort, outcome


@pytest.fixture(scope="module")
def templates():
    return load_templates()


class TestComposeFeedback:
    def test_outcome_only_uses_reframing_template(self, templates):
        response = annotate("r", "You are doing great.")
        message = compose_feedback([outcome(2, 4)], response, templates)
        assert message.verdict is Verdict.OUTCOME_ONLY
        assert 'Saying "doing great" is praising the student for the outcome' in message.body
        assert "Do you want to try responding again?" in message.body
        assert message.cited_spans == ((PraiseType.OUTCOME, "doing great"),)

    def test_effort_span_wins_affirmation(self, templates):
        text = (
            "You are almost there! I am proud of how you are persevering through "
            "and striving to solve the problem. Keep going!"
        )
        response = annotate("r", text)
        message = compose_feedback([effort(11, 19)], response, templates)
        assert message.verdict is Verdict.EFFORT_PRAISED
        assert "persevering through and striving to solve the problem" in message.body

    def test_effort_beats_outcome_for_verdict(self, templates):
        response = annotate("r", "Great job, you worked so hard")
        message = compose_feedback([outcome(0, 2), effort(2, 6)], response, templates)
        assert message.verdict is Verdict.EFFORT_PRAISED

    def test_no_spans(self, templates):
        response = annotate("r", "Can I see any of your writing")
        message = compose_feedback([], response, templates)
        assert message.verdict is Verdict.NO_PRAISE_FOUND
        assert message.body
        assert message.cited_spans == ()

    def test_cited_phrases_occur_in_response(self, templates):
        response = annotate("r", "Great job! You worked so hard on this.")
        message = compose_feedback([outcome(0, 2), effort(3, 8)], response, templates)
        for _, surface in message.cited_spans:
            assert surface in response.text


class TestHighlightMarkup:
    def test_span_plus_plain_tail(self):
        response = annotate("r", "Great job, Kevin!")
        markup = render_highlight_markup(response, [outcome(0, 2)])
        assert [(s.text, s.style) for s in markup.segments] == [
            ("Great job", "outcome"),
            (", Kevin!", "plain"),
        ]

    def test_no_spans_single_plain_segment(self):
        response = annotate("r", "Just checking in.")
        markup = render_highlight_markup(response, [])
        assert [(s.text, s.style) for s in markup.segments] == [("Just checking in.", "plain")]

    def test_effort_wins_overlap(self):
        response = annotate("r", "doing great work")
        markup = render_highlight_markup(response, [outcome(0, 2), effort(1, 3)])
        styles = {s.style for s in markup.segments}
        assert "effort" in styles
        # token "great" is covered by both spans; effort takes it
        great = next(s for s in markup.segments if "great" in s.text)
        assert great.style == "effort"

    def test_inter_token_punctuation_inherits_span_style(self):
        response = annotate("r", "Stick with this. We can finish it.")
        markup = render_highlight_markup(response, [effort(0, 4)])
        # the period between "this" and "We" sits inside the span's char range
        assert markup.segments[0].text == "Stick with this. We"
        assert markup.segments[0].style == "effort"

    def test_round_trip_exact_text(self, mini_corpus):
        for response in mini_corpus:
            markup = render_highlight_markup(response, response.gold)
            assert markup.text() == response.text


@given(st.text(max_size=60), st.data())
def test_markup_concatenation_always_round_trips(text, data):
    response = annotate("r", text)
    n = len(response.tokens)
    spans = []
    if n:
        for _ in range(data.draw(st.integers(min_value=0, max_value=3))):
            start = data.draw(st.integers(min_value=0, max_value=n - 1))
            end = data.draw(st.integers(min_value=start + 1, max_value=n))
            ptype = data.draw(st.sampled_from([PraiseType.EFFORT, PraiseType.OUTCOME]))
            spans.append(type(effort(0, 1))(ptype, start, end))
    markup = render_highlight_markup(response, spans)
    assert markup.text() == text
