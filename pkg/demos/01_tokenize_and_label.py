"""Tokenization, gold spans, and IO label encoding on the bundled mini corpus."""
from praisekit import load_mini_corpus, label_distribution, to_io_labels, tokenize
from praisekit.annotation import render_label_table

print("Tokenizing a tutor response keeps words, drops punctuation:")
tokens = tokenize("Great job, Kevin! I can tell how hard you worked to get there.")
print(" ", [t.surface for t in tokens])
print("  normalized:", list(tokens.normalized()))

corpus = load_mini_corpus()
print(f"\nThe bundled mini corpus has {len(corpus)} annotated responses:")
for response in corpus:
    labels = [label.value for label in to_io_labels(response)]
    print(f"\n  {response.id}: {response.text}")
    for token, label in zip(response.tokens, labels):
        marker = "" if label == "O" else f"  <- {label}"
        print(f"    {token.index:>2}  {token.surface:<15}{marker}")

print("\nToken label distribution over the corpus:")
print(render_label_table(label_distribution(corpus)))
