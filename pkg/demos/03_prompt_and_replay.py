"""The two-shot prompt, the replay client, and phrase-to-span alignment."""
from praisekit import bundled, build_highlight_prompt, extract_praise
from praisekit.llm import ReplayChatClient, request_digest

bundle = build_highlight_prompt("You are doing great.")
print(f"The highlight prompt is a fixed {len(bundle.messages)}-turn conversation:")
for message in bundle.messages:
    first_line = message.content.splitlines()[0]
    preview = first_line[:72] + ("..." if len(first_line) > 72 or "\n" in message.content else "")
    print(f"  {message.role:<9} | {preview}")

print(f"\nRequest digest (keys the replay fixtures): {request_digest(bundle.messages)[:16]}...")

client = ReplayChatClient.from_file(bundled.fixture_path("gpt35"))
corpus = bundled.load_mini_corpus()
print("\nReplaying the recorded model outputs for the mini corpus:")
for response in corpus:
    report = extract_praise(client, response)
    print(f"\n  {response.id}: {response.text}")
    for span in sorted(report.spans, key=lambda s: s.start):
        surface = response.tokens.span_surface(span.start, span.end)
        print(f"    {span.praise_type.value:<8} [{span.start:>2}, {span.end:>2})  {surface!r}")
    if report.failures:
        print(f"    unlocatable phrases: {report.failures}")
