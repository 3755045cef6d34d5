from __future__ import annotations

import io
import json

import pytest

from praisekit.annotation import (
    Corpus,
    LabelDistribution,
    PraiseLabel,
    PraiseType,
    SpanSnapWarning,
    TypedSpan,
    annotate,
    dump_corpus,
    from_io_labels,
    label_distribution,
    load_corpus,
    render_label_table,
    to_io_labels,
    with_predicted,
)
from praisekit.errors import (
    DuplicateIdError,
    MalformedRecordError,
    MissingPredictionError,
    UnknownPraiseTypeError,
)

from .conftest import effort, outcome


def record(rid="r1", text="Great job, Kevin!", gold=None):
    if gold is None:
        gold = [{"type": "outcome", "char_start": 0, "char_end": 9}]
    return json.dumps({"id": rid, "text": text, "gold": gold})


class TestLoadCorpus:
    def test_char_offsets_resolve_to_token_spans(self):
        corpus = load_corpus(record())
        assert corpus[0].gold == frozenset({outcome(0, 2)})

    def test_person_praise_rejected(self):
        with pytest.raises(UnknownPraiseTypeError):
            load_corpus(record(gold=[{"type": "person", "char_start": 0, "char_end": 9}]))

    def test_empty_gold_allowed(self):
        corpus = load_corpus(record(gold=[]))
        assert corpus[0].gold == frozenset()

    def test_duplicate_id(self):
        with pytest.raises(DuplicateIdError):
            load_corpus(record() + "\n" + record())

    def test_bad_json(self):
        with pytest.raises(MalformedRecordError, match="line 1"):
            load_corpus("{nope}")

    @pytest.mark.parametrize(
        "gold",
        [
            [{"type": "outcome", "char_start": "0", "char_end": 9}],
            [{"type": "outcome"}],
            ["outcome"],
        ],
    )
    def test_bad_gold_entries(self, gold):
        with pytest.raises(MalformedRecordError):
            load_corpus(record(gold=gold))

    def test_missing_fields(self):
        with pytest.raises(MalformedRecordError):
            load_corpus(json.dumps({"id": "r1", "text": "hi"}))

    def test_span_cutting_token_snaps_outward_with_warning(self):
        # chars [0, 3) cover only part of "Great"; the span widens to the token
        with pytest.warns(SpanSnapWarning):
            corpus = load_corpus(record(gold=[{"type": "outcome", "char_start": 0, "char_end": 3}]))
        assert corpus[0].gold == frozenset({outcome(0, 1)})

    def test_span_over_trailing_punctuation_does_not_warn(self):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            corpus = load_corpus(record(gold=[{"type": "outcome", "char_start": 0, "char_end": 10}]))
        assert corpus[0].gold == frozenset({outcome(0, 2)})

    def test_span_covering_no_tokens(self):
        with pytest.raises(MalformedRecordError, match="covers no tokens"):
            load_corpus(record(text="Great job !!", gold=[{"type": "outcome", "char_start": 10, "char_end": 12}]))

    def test_accepts_bytes_stream(self):
        corpus = load_corpus(io.BytesIO(record().encode("utf-8")))
        assert len(corpus) == 1

    def test_blank_lines_skipped(self):
        corpus = load_corpus("\n" + record() + "\n\n")
        assert len(corpus) == 1


def test_dump_corpus_round_trips(mini_corpus):
    buffer = io.StringIO()
    assert dump_corpus(mini_corpus, buffer) == len(mini_corpus)
    reloaded = load_corpus(buffer.getvalue())
    assert [r.id for r in reloaded] == [r.id for r in mini_corpus]
    for before, after in zip(mini_corpus, reloaded):
        assert before.text == after.text
        assert before.gold == after.gold


class TestTypedSpan:
    def test_rejects_empty_span(self):
        with pytest.raises(ValueError):
            TypedSpan(PraiseType.EFFORT, 2, 2)

    def test_rejects_out_of_bounds_on_annotate(self):
        with pytest.raises(ValueError):
            annotate("r", "Great job", gold=[outcome(0, 3)])

    def test_rejects_same_type_gold_overlap(self):
        with pytest.raises(ValueError):
            annotate("r", "one two three four", gold=[effort(0, 2), effort(1, 3)])

    def test_predicted_may_overlap(self):
        response = annotate("r", "one two three four")
        updated = with_predicted(response, [effort(0, 2), effort(1, 3)])
        assert updated.predicted is not None and len(updated.predicted) == 2


class TestIoLabels:
    def test_effort_span_labels_inside_tokens(self):
        # gold effort over "great effort" in a six-token response
        response = annotate("r", "You are making a great effort", gold=[effort(4, 6)])
        assert to_io_labels(response) == [
            PraiseLabel.O,
            PraiseLabel.O,
            PraiseLabel.O,
            PraiseLabel.O,
            PraiseLabel.I_EFFORT,
            PraiseLabel.I_EFFORT,
        ]

    def test_empty_gold_all_outside(self):
        response = annotate("r", "Can I see any of your writing")
        assert set(to_io_labels(response)) == {PraiseLabel.O}

    def test_cross_type_overlap_resolves_to_effort(self):
        response = annotate("r", "a b c d e f")
        updated = with_predicted(response, [effort(1, 4), outcome(3, 5)])
        labels = to_io_labels(updated, "predicted")
        assert labels[3] is PraiseLabel.I_EFFORT
        assert labels[4] is PraiseLabel.I_OUTCOME

    def test_missing_prediction(self):
        with pytest.raises(MissingPredictionError):
            to_io_labels(annotate("r", "hi there"), "predicted")

    def test_round_trip_without_cross_type_overlap(self):
        spans = frozenset({effort(1, 3), outcome(4, 5), effort(5, 6)})
        response = annotate("r", "a b c d e f g", gold=spans)
        assert from_io_labels(to_io_labels(response)) == spans


class TestLabelDistribution:
    def test_direct_count(self):
        corpus = Corpus((annotate("r", "a b great", gold=[effort(2, 3)]),))
        dist = label_distribution(corpus)
        assert dist.counts[PraiseLabel.O] == 2
        assert dist.counts[PraiseLabel.I_EFFORT] == 1
        assert dist.counts[PraiseLabel.I_OUTCOME] == 0
        assert dist.percentage(PraiseLabel.O) == pytest.approx(66.67, abs=0.01)
        assert dist.percentage(PraiseLabel.I_EFFORT) == pytest.approx(33.33, abs=0.01)

    def test_empty_corpus_gives_zero_table(self):
        dist = label_distribution(Corpus(()))
        assert dist.total == 0
        assert all(count == 0 for count in dist.counts.values())
        assert "zero tokens" in render_label_table(dist)

    def test_mini_corpus_distribution_matches_hand_count(self, mini_corpus):
        # Hand tally over the three bundled responses: 14 + 13 + 17 = 44 tokens;
        # effort spans cover 3 + 7 + 4 = 14 tokens, outcome spans 2 + 2 + 2 = 6.
        dist = label_distribution(mini_corpus)
        assert dist.total == 44
        assert dist.counts[PraiseLabel.I_EFFORT] == 14
        assert dist.counts[PraiseLabel.I_OUTCOME] == 6
        assert dist.counts[PraiseLabel.O] == 24

    def test_percentages_sum_to_100(self, mini_corpus):
        dist = label_distribution(mini_corpus)
        assert sum(dist.percentage(label) for label in PraiseLabel) == pytest.approx(100.0, abs=0.01)
