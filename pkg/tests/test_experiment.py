from __future__ import annotations

import io
import json

import pytest

from praisekit.annotation import Corpus, PraiseType, annotate
from praisekit.errors import (
    CorpusTooSmallError,
    DegenerateVarianceError,
    EmptyGroupError,
    InsufficientOverlapError,
    MalformedRecordError,
    SizeExceedsTrainError,
)
from praisekit.experiment import (
    AVERAGE_CODER,
    PartitionPlan,
    RatingRecord,
    ScoreRecord,
    SplitSpec,
    correlate_ratings,
    emit_finetune_dataset,
    finetune_record,
    make_partitions,
    read_ratings,
    run_evaluation,
    split_train_test,
    summarize_runs,
    summarize_scores,
)
from praisekit.llm import ReplayChatClient, parse_extraction
from praisekit.metrics import MiouConfig

from .conftest import effort, make_fixture, outcome


def synthetic_corpus(n: int) -> Corpus:
    return Corpus(tuple(annotate(f"s{i:03d}", f"Response number {i} looks good") for i in range(n)))


class TestSplit:
    def test_half_split_of_129_gives_65_train(self):
        train, test = split_train_test(synthetic_corpus(129), SplitSpec(0.5, seed=7))
        assert (len(train), len(test)) == (65, 64)

    def test_same_seed_same_membership(self):
        corpus = synthetic_corpus(40)
        first = split_train_test(corpus, SplitSpec(0.5, seed=3))
        second = split_train_test(corpus, SplitSpec(0.5, seed=3))
        assert first[0].ids() == second[0].ids()
        assert first[1].ids() == second[1].ids()

    def test_different_seeds_differ_on_four_responses(self):
        corpus = synthetic_corpus(4)
        train_1, _ = split_train_test(corpus, SplitSpec(0.5, seed=1))
        train_2, _ = split_train_test(corpus, SplitSpec(0.5, seed=2))
        assert len(train_1) == len(train_2) == 2
        assert set(train_1.ids()) != set(train_2.ids())

    def test_partition_is_disjoint_and_exhaustive(self):
        corpus = synthetic_corpus(31)
        train, test = split_train_test(corpus, SplitSpec(0.3, seed=11))
        assert set(train.ids()) | set(test.ids()) == set(corpus.ids())
        assert set(train.ids()) & set(test.ids()) == set()
        assert len(train) == 9  # round-half-up of 9.3

    def test_too_small(self):
        with pytest.raises(CorpusTooSmallError):
            split_train_test(synthetic_corpus(1), SplitSpec(0.5, seed=0))

    def test_bad_fraction(self):
        with pytest.raises(ValueError):
            SplitSpec(1.0, seed=0)


class TestPartitions:
    def test_five_sizes_times_five_seeds(self):
        train = synthetic_corpus(65)
        parts = make_partitions(train, PartitionPlan(sizes=(13, 26, 39, 52, 65), seeds_per_size=5))
        assert len(parts) == 25
        assert {(p.size, p.seed) for p in parts} == {(s, k) for s in (13, 26, 39, 52, 65) for k in range(5)}
        for part in parts:
            assert len(part.subset) == part.size

    def test_full_size_sample_equals_train(self):
        train = synthetic_corpus(20)
        parts = make_partitions(train, PartitionPlan(sizes=(20,), seeds_per_size=3))
        for part in parts:
            assert part.subset.ids() == train.ids()

    def test_same_seed_same_ids(self):
        train = synthetic_corpus(30)
        plan = PartitionPlan(sizes=(13,), seeds_per_size=1, base_seed=9)
        first = make_partitions(train, plan)[0]
        second = make_partitions(train, plan)[0]
        assert first.subset.ids() == second.subset.ids()

    def test_size_exceeding_train_rejected(self):
        with pytest.raises(SizeExceedsTrainError):
            make_partitions(synthetic_corpus(10), PartitionPlan(sizes=(11,)))


class TestFinetuneDataset:
    def test_gold_phrases_in_final_assistant_turn(self, mini_corpus):
        record = finetune_record(mini_corpus.by_id("t5r2"))
        final = record["messages"][-1]
        assert final["role"] == "assistant"
        assert json.loads(final["content"]) == {
            "effort": ["I can tell how hard you worked"],
            "outcome": ["Great job"],
        }

    def test_no_praise_response_gets_empty_lists(self):
        response = annotate("quiet", "Can I see any of your writing")
        final = finetune_record(response)["messages"][-1]
        assert json.loads(final["content"]) == {"effort": [], "outcome": []}

    def test_each_record_parses_independently(self, mini_corpus):
        sink = io.StringIO()
        assert emit_finetune_dataset(mini_corpus, sink) == 3
        lines = sink.getvalue().splitlines()
        assert len(lines) == 3
        for line in lines:
            record = json.loads(line)
            roles = [m["role"] for m in record["messages"]]
            assert roles[0] == "system"
            assert roles[-2:] == ["user", "assistant"]

    def test_final_turn_round_trips_through_parser(self, mini_corpus):
        sink = io.StringIO()
        emit_finetune_dataset(mini_corpus, sink)
        for line, response in zip(sink.getvalue().splitlines(), mini_corpus):
            final = json.loads(line)["messages"][-1]["content"]
            extraction = parse_extraction(final)
            gold_effort = [
                response.tokens.span_surface(s.start, s.end)
                for s in sorted(response.gold, key=lambda s: s.start)
                if s.praise_type is PraiseType.EFFORT
            ]
            assert list(extraction.effort_phrases) == gold_effort


class TestRunEvaluation:
    def test_replay_reproduces_published_effort_column(self, mini_corpus, gpt35_client):
        result = run_evaluation(gpt35_client, mini_corpus, MiouConfig(0.2))
        efforts = [round(r.span_miou, 2) for r in result.records if r.praise_type is PraiseType.EFFORT]
        assert efforts == [0.50, 0.53, 0.48]
        assert result.failures == ()

    def test_empty_corpus(self, gpt35_client):
        result = run_evaluation(gpt35_client, Corpus(()), MiouConfig())
        assert result.records == ()
        assert result.failures == ()

    def test_partial_failure_keeps_other_records(self, mini_corpus, gpt35_client):
        # break t5r1's reply (malformed, and no corrective fixture either)
        fixtures = dict(gpt35_client._fixtures)
        bad = make_fixture((mini_corpus.by_id("t5r1").text, "no json here, sorry"))
        fixtures.update(bad)
        result = run_evaluation(ReplayChatClient(fixtures), mini_corpus, MiouConfig())
        scored_ids = {r.response_id for r in result.records}
        assert scored_ids == {"t5r2", "t5r3"}
        assert [f.response_id for f in result.failures] == ["t5r1"]

    def test_hallucinated_phrase_penalized(self):
        response = annotate("r", "Great job!", gold=[outcome(0, 2)])
        fixtures = make_fixture(
            ("Great job!", '{"effort": ["working so hard on this"], "outcome": ["Great job"]}')
        )
        result = run_evaluation(ReplayChatClient(fixtures), Corpus((response,)), MiouConfig())
        by_type = {r.praise_type: r for r in result.records}
        # the unlocatable 5-token phrase forms a zero-scoring cluster and
        # contributes fp=5 to the effort token counts
        assert by_type[PraiseType.EFFORT].span_miou == 0.0
        assert by_type[PraiseType.EFFORT].iou == 0.0
        assert by_type[PraiseType.OUTCOME].span_miou == 1.0

    def test_concurrent_run_matches_sequential(self, mini_corpus, gpt35_client):
        sequential = run_evaluation(gpt35_client, mini_corpus, MiouConfig())
        threaded = run_evaluation(gpt35_client, mini_corpus, MiouConfig(), max_workers=3)
        assert sequential == threaded


class TestSummaries:
    def _records(self, mean: float, n: int = 4) -> list[ScoreRecord]:
        return [
            ScoreRecord(f"r{i}", ptype, mean, mean, mean, mean)
            for i in range(n)
            for ptype in PraiseType
        ]

    def test_seed_mean_aggregation(self):
        grouped = {
            (13, seed): self._records(value)
            for seed, value in zip(range(5), [0.44, 0.58, 0.51, 0.49, 0.53])
        }
        report = summarize_runs(grouped)
        row = next(r for r in report.rows if r.praise_type is PraiseType.EFFORT)
        assert row.size == 13
        assert row.stats.mean == pytest.approx(0.51)
        assert row.stats.min == pytest.approx(0.44)
        assert row.stats.max == pytest.approx(0.58)
        assert [seed for seed, _ in row.seed_means] == [0, 1, 2, 3, 4]

    def test_single_seed_zero_std(self):
        report = summarize_runs({(26, 0): self._records(0.7)})
        assert all(row.stats.std == 0.0 for row in report.rows)

    def test_row_count_is_sizes_times_types(self):
        grouped = {(size, seed): self._records(0.5) for size in (13, 26, 39) for seed in range(2)}
        report = summarize_runs(grouped)
        assert len(report.rows) == 3 * 2

    def test_permutation_invariance(self):
        grouped = {(13, seed): self._records(0.1 * (seed + 1)) for seed in range(5)}
        shuffled = dict(reversed(list(grouped.items())))
        assert summarize_runs(grouped) == summarize_runs(shuffled)

    def test_empty_group_rejected(self):
        with pytest.raises(EmptyGroupError):
            summarize_runs({(13, 0): []})

    def test_summarize_scores_requires_both_types(self):
        records = [ScoreRecord("r", PraiseType.EFFORT, 0.5, 0.5, 0.5, 0.5)]
        with pytest.raises(EmptyGroupError):
            summarize_scores(records)


def score_records(values: dict[str, float], ptype: PraiseType) -> list[ScoreRecord]:
    return [ScoreRecord(rid, ptype, v, v, v, v) for rid, v in values.items()]


class TestCorrelateRatings:
    def _scores(self) -> list[ScoreRecord]:
        values = {f"r{i}": i / 10 for i in range(11)}
        return score_records(values, PraiseType.EFFORT) + score_records(values, PraiseType.OUTCOME)

    def _monotone_ratings(self, coder: str) -> list[RatingRecord]:
        return [
            RatingRecord(f"r{i}", coder, 1 + round(4 * (i / 10)), 1 + round(4 * (i / 10)))
            for i in range(11)
        ]

    def test_monotone_ratings_correlate_strongly(self):
        ratings = self._monotone_ratings("c1") + self._monotone_ratings("c2")
        report = correlate_ratings(self._scores(), ratings)
        for ptype in PraiseType:
            for coder in ("c1", "c2", AVERAGE_CODER):
                assert report.cell(ptype, coder).pearson > 0.9

    def test_constant_ratings_degenerate(self):
        ratings = [RatingRecord(f"r{i}", "c1", 3, 3) for i in range(11)]
        with pytest.raises(DegenerateVarianceError):
            correlate_ratings(self._scores(), ratings)

    def test_average_of_two_coders(self):
        # normalized 0.75 and 0.25 average to 0.5 per response
        scores = score_records({"a": 0.2, "b": 0.9}, PraiseType.EFFORT) + score_records(
            {"a": 0.2, "b": 0.9}, PraiseType.OUTCOME
        )
        ratings = [
            RatingRecord("a", "c1", 4, 4),
            RatingRecord("a", "c2", 2, 2),
            RatingRecord("b", "c1", 4, 4),
            RatingRecord("b", "c2", 2, 2),
        ]
        with pytest.raises(DegenerateVarianceError):
            # each coder is constant across the two responses
            correlate_ratings(scores, ratings)
        ratings = [
            RatingRecord("a", "c1", 4, 4),
            RatingRecord("a", "c2", 2, 2),
            RatingRecord("b", "c1", 5, 5),
            RatingRecord("b", "c2", 3, 3),
        ]
        report = correlate_ratings(scores, ratings)
        cell = report.cell(PraiseType.EFFORT, AVERAGE_CODER)
        assert cell.normalized_mean == pytest.approx((0.5 + 0.75) / 2)

    def test_insufficient_overlap(self):
        scores = score_records({"a": 0.2}, PraiseType.EFFORT) + score_records({"a": 0.2}, PraiseType.OUTCOME)
        ratings = [RatingRecord("a", "c1", 3, 3)]
        with pytest.raises(InsufficientOverlapError):
            correlate_ratings(scores, ratings)


class TestReadRatings:
    def test_round_trip(self):
        csv_text = "response_id,coder_id,effort_rating,outcome_rating\nr1,c1,4,5\nr2,c1,1,3\n"
        records = read_ratings(io.StringIO(csv_text))
        assert records == (
            RatingRecord("r1", "c1", 4, 5),
            RatingRecord("r2", "c1", 1, 3),
        )

    def test_bad_header(self):
        with pytest.raises(MalformedRecordError):
            read_ratings(io.StringIO("id,coder,e,o\nr1,c1,4,5\n"))

    def test_out_of_range_rating(self):
        from praisekit.errors import RatingOutOfRangeError

        with pytest.raises(RatingOutOfRangeError):
            read_ratings(io.StringIO("response_id,coder_id,effort_rating,outcome_rating\nr1,c1,6,3\n"))

    def test_non_integer_rating(self):
        with pytest.raises(MalformedRecordError):
            read_ratings(io.StringIO("response_id,coder_id,effort_rating,outcome_rating\nr1,c1,x,3\n"))
