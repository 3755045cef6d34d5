"""Regenerate the bundled data files.

Writes the mini corpus (the three worked-example responses with expert gold
spans) and the replay fixture files holding the recorded model outputs for
them, keyed by request digest. Run from the repository root:

    python scripts/generate_data.py
"""
from __future__ import annotations

import json
from pathlib import Path

from praisekit.annotation import load_corpus
from praisekit.llm import build_highlight_prompt, request_digest

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "praisekit" / "data"

RESPONSES = {
    "t5r1": "Carla you are doing a great job! Stick with this. We can finish it.",
    "t5r2": "Great job, Kevin! I can tell how hard you worked to get there.",
    "t5r3": "Great job Kevin! Your determination is really admirable! "
            "Pretty sure you can complete it with this determination!",
}

# Expert gold spans as (type, phrase); offsets are derived below.
GOLD = {
    "t5r1": [("outcome", "great job"), ("effort", "Stick with this")],
    "t5r2": [("outcome", "Great job"), ("effort", "I can tell how hard you worked")],
    "t5r3": [("outcome", "Great job"), ("effort", "determination is really admirable")],
}

# Recorded model outputs for the mini corpus.
GPT35_REPLIES = {
    "t5r1": {"effort": ["doing a great job", "Stick with this"], "outcome": []},
    "t5r2": {"effort": ["how hard you worked to get there"], "outcome": ["Great job"]},
    "t5r3": {
        "effort": [
            "Your determination is really admirable",
            "Pretty sure you can complete it with this determination",
        ],
        "outcome": ["Great job"],
    },
}

GPT4_REPLIES = {
    "t5r1": {"effort": ["Stick with this", "We can finish it"], "outcome": ["doing a great job"]},
    "t5r2": {"effort": ["I can tell how hard you worked"], "outcome": ["Great job"]},
    "t5r3": GPT35_REPLIES["t5r3"],
}

# Extra recorded replies so the demo service and trainer UI work offline on
# a few obvious inputs.
DEMO_EXTRAS = {
    "Good job!": {"effort": [], "outcome": ["Good job"]},
    "You are doing great.": {"effort": [], "outcome": ["doing great"]},
    "I am proud of how you are persevering": {
        "effort": ["I am proud of how you are persevering"],
        "outcome": [],
    },
    "Can I see any of your writing": {"effort": [], "outcome": []},
}


def corpus_lines() -> list[str]:
    lines = []
    for rid, text in RESPONSES.items():
        gold = []
        for ptype, phrase in GOLD[rid]:
            start = text.index(phrase)
            gold.append({"type": ptype, "char_start": start, "char_end": start + len(phrase)})
        lines.append(json.dumps({"id": rid, "text": text, "gold": gold}, ensure_ascii=False))
    return lines


def fixture_entries(replies: dict[str, dict]) -> dict[str, str]:
    entries = {}
    for text_or_id, phrase_lists in replies.items():
        text = RESPONSES.get(text_or_id, text_or_id)
        digest = request_digest(build_highlight_prompt(text).messages)
        entries[digest] = json.dumps(phrase_lists, ensure_ascii=False)
    return entries


def write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def main() -> None:
    corpus_path = DATA_DIR / "mini_corpus.jsonl"
    corpus_path.write_text("\n".join(corpus_lines()) + "\n", encoding="utf-8")
    load_corpus(corpus_path.read_text(encoding="utf-8"))  # sanity: it parses
    print(f"wrote {corpus_path}")

    gpt35 = fixture_entries(GPT35_REPLIES)
    gpt4 = fixture_entries(GPT4_REPLIES)
    demo = {**gpt35, **fixture_entries(DEMO_EXTRAS)}
    for name, entries in (("gpt35", gpt35), ("gpt4", gpt4), ("demo", demo)):
        path = DATA_DIR / "fixtures" / f"{name}.json"
        write_json(path, entries)
        print(f"wrote {path} ({len(entries)} entries)")


if __name__ == "__main__":
    main()
