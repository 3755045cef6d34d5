from __future__ import annotations

import pytest

from praisekit import bundled
from praisekit.annotation import Corpus, PraiseType, TypedSpan, annotate
from praisekit.llm import ReplayChatClient, build_highlight_prompt, request_digest


@pytest.fixture(scope="session")
def mini_corpus() -> Corpus:
    return bundled.load_mini_corpus()


@pytest.fixture(scope="session")
def gpt35_client() -> ReplayChatClient:
    return ReplayChatClient.from_file(bundled.fixture_path("gpt35"))


@pytest.fixture(scope="session")
def gpt4_client() -> ReplayChatClient:
    return ReplayChatClient.from_file(bundled.fixture_path("gpt4"))


def make_fixture(*entries: tuple[str, str]) -> dict[str, str]:
    """Build a replay fixture dict from (response_text, reply) pairs."""
    return {
        request_digest(build_highlight_prompt(text).messages): reply
        for text, reply in entries
    }


def effort(start: int, end: int) -> TypedSpan:
    return TypedSpan(PraiseType.EFFORT, start, end)


def outcome(start: int, end: int) -> TypedSpan:
    return TypedSpan(PraiseType.OUTCOME, start, end)


@pytest.fixture()
def kevin_response():
    text = "Great job, Kevin! I can tell how hard you worked to get there."
    return annotate("t5r2", text, gold=[outcome(0, 2), effort(3, 10)])
