"""The trainee feedback loop: highlights in, verdict + explanation out.

This is what the HTTP service does per request; here it runs in-process
against the bundled demo fixtures.
"""
from praisekit import bundled, compose_feedback, extract_praise, render_highlight_markup
from praisekit.annotation import annotate
from praisekit.llm import ReplayChatClient

client = ReplayChatClient.from_file(bundled.fixture_path("demo"))

ATTEMPTS = [
    "Good job!",
    "Can I see any of your writing",
    "I am proud of how you are persevering",
]

for attempt_number, text in enumerate(ATTEMPTS, start=1):
    response = annotate(f"attempt-{attempt_number}", text)
    report = extract_praise(client, response)
    feedback = compose_feedback(report.spans, response)
    markup = render_highlight_markup(response, report.spans)
    rendered = "".join(
        f"[{segment.style}:{segment.text}]" if segment.style != "plain" else segment.text
        for segment in markup.segments
    )
    print(f"Attempt {attempt_number}: {text}")
    print(f"  highlighted: {rendered}")
    print(f"  verdict:     {feedback.verdict.value}")
    print(f"  feedback:    {feedback.body}")
    print()
