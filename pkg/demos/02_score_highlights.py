"""The overlap metric family, from raw counts to span-cluster scoring.

Shows why the span-cluster mean is the reported variant: when a model emits
several highlight phrases and only some match the expert annotation, scoring
the whole response as one token pool hides the miss.
"""
from praisekit import ConfusionCounts, MiouConfig, f1_score, iou_score, span_miou, token_miou
from praisekit.annotation import PraiseType, TypedSpan
from praisekit.textcore import tokenize

counts = ConfusionCounts(tp=4, fp=3, fn=3)
print("Token counts tp=4 fp=3 fn=3 (a highlight shifted by a few words):")
print(f"  f1        = {f1_score(counts):.3f}")
print(f"  iou       = {iou_score(counts):.3f}")
print(f"  miou(0.2) = {token_miou(counts, MiouConfig(0.2)):.3f}   <- false positives discounted")
print(f"  miou(1.0) = {token_miou(counts, MiouConfig(1.0)):.3f}   <- equals iou")

print("\nNo praise predicted, none annotated -> every score is exactly 1:")
zero = ConfusionCounts(0, 0, 0)
print(f"  f1={f1_score(zero)}, iou={iou_score(zero)}, miou={token_miou(zero)}")

text = "Carla you are doing a great job! Stick with this. We can finish it."
tokens = tokenize(text)
effort = lambda start, end: TypedSpan(PraiseType.EFFORT, start, end)

print(f"\n{text}")
print('Model highlights "doing a great job" and "Stick with this" as effort;')
print('the expert marked only "Stick with this".')
pred = [effort(3, 7), effort(7, 10)]
gold = [effort(7, 10)]
print(f"  span-cluster score: {span_miou(pred, gold, tokens):.2f}  (one perfect cluster, one miss)")

pooled = ConfusionCounts(tp=3, fp=4, fn=0)
print(f"  whole-response token score would be {token_miou(pooled):.2f} - too forgiving,")
print("  which is why reports use the span-cluster mean.")
