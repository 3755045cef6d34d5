"""The full experiment protocol: split, partitions, fine-tune data, replay
evaluation, the summary table, and correlation with (synthetic) ratings."""
import io

from praisekit import bundled
from praisekit.annotation import Corpus, PraiseType, annotate
from praisekit.experiment import (
    PartitionPlan,
    RatingRecord,
    SplitSpec,
    correlate_ratings,
    emit_finetune_dataset,
    make_partitions,
    render_correlation_report,
    render_stats_table,
    run_evaluation,
    split_train_test,
    summarize_scores,
)
from praisekit.llm import ReplayChatClient
from praisekit.metrics import MiouConfig

corpus = Corpus(tuple(annotate(f"s{i:03d}", f"Response number {i} looks good") for i in range(129)))
train, test = split_train_test(corpus, SplitSpec(train_fraction=0.5, seed=42))
print(f"Seeded 50% split of {len(corpus)} responses: {len(train)} train / {len(test)} test")

plan = PartitionPlan(sizes=(13, 26, 39, 52, 65), seeds_per_size=5)
partitions = make_partitions(train, plan)
print(f"Training-size plan: {len(partitions)} subsets "
      f"(sizes {plan.sizes}, seeds {list(plan.seeds())})")

mini = bundled.load_mini_corpus()
sink = io.StringIO()
emit_finetune_dataset(mini, sink)
print(f"\nFine-tune dataset for the mini corpus: {len(sink.getvalue().splitlines())} records;")
print("last turn of the first record:")
import json
print(" ", json.loads(sink.getvalue().splitlines()[0])["messages"][-1])

client = ReplayChatClient.from_file(bundled.fixture_path("gpt35"))
result = run_evaluation(client, mini, MiouConfig(alpha=0.2))
print("\nReplay evaluation of the recorded model outputs:")
for record in result.records:
    print(f"  {record.response_id}  {record.praise_type.value:<8} span={record.span_miou:.2f} "
          f"token={record.token_miou:.2f} f1={record.f1:.2f} iou={record.iou:.2f}")
print()
print(render_stats_table([(f"n={len(mini)}", summarize_scores(result.records))], label="Test set"))

ratings = [
    RatingRecord(r.response_id, coder, 1 + round(4 * r.span_miou), 1 + round(4 * r.span_miou))
    for r in result.records
    if r.praise_type is PraiseType.EFFORT
    for coder in ("coder_1", "coder_2")
]
print("\nCorrelation of span scores with (synthetic, score-derived) ratings:")
print(render_correlation_report(correlate_ratings(list(result.records), ratings)))
