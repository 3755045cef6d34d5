"""Two-shot prompt construction, chat-completion clients, and span alignment.

The prompt is a fixed twelve-turn conversation: a system instruction, the
lesson principle, one worked outcome-praise example, one worked effort-praise
example (each with the interleaving "again" turns), and a final user turn
carrying the tutor response under analysis. The model is asked to reply with
a JSON object mapping "effort" and "outcome" to phrase lists.

Two clients speak that contract: HttpChatClient posts role/content message
arrays to a chat-completion endpoint, and ReplayChatClient serves recorded
replies keyed by a digest of the request messages so tests and demos never
touch the network.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Literal, Mapping, Protocol, Sequence

import httpx

from .annotation import AnnotatedResponse, PraiseType, TypedSpan
from .errors import (
    AuthFailureError,
    EmptyResponseError,
    ExtractionError,
    MissingFixtureError,
    NoObjectFoundError,
    ProviderError,
    ProviderTimeoutError,
    RateLimitedError,
    SchemaViolationError,
)
from .textcore import locate_phrase, tokenize

Role = Literal["system", "user", "assistant"]


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"bad role {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")


SYSTEM_INSTRUCTION = (
    "You are a response evaluator designed to output JSON. Your task is to analyze tutor "
    "responses based on the principles of effective praise focusing on 'effort' and 'outcome'. "
    "Extract words or phrases that represent praise for the student's effort and outcome, and "
    "output the results in JSON format with keys titled 'Effort' and 'Outcome'."
)

LESSON_PRINCIPLE = """The following is the principle that a correct response should follow:
Praising students for working hard and putting forth effort is a great way to increase student motivation. When the learning gets tough, giving correct praise is a powerful strategy to encourage students to keep going.
The correct response should be :
-perceived as sincere, earned, and truthful.
-specific by giving details of what the student did well.
-immediate with praise given right after the student action.
-authentic and is not repeated often, such as "great job" which loses meaning and becomes predictable.
-focused on the learning process, not ability
(AJTutoring.com, 2022)
Correct responses must follow some, but not all the above.
There are two types of praise responses: Effort and Outcome praise
- Effort praise focuses on the learning process. Effort praise recognizes students for putting forth effort and persevering through the learning process instead of focusing on whether a student got the problem correct or pure ability.
- Outcome praise showcases student's achievements, such as getting a grade A on an assignment or getting a problem correct, and is often, but not always, associated with unproductive praise.
To receive full credit of correct praise, tutors cannot just say "great job" and praise with no specific reasoning. Tutors need to praise for effort AND be positive and encouraging."""

ASK_FOR_RESPONSE = "Sure, can you provide a tutor response for analysis"
ASK_FOR_RESPONSE_AGAIN = "Sure, can you provide a tutor response for analysis?"
NEXT_ROUND = "Nice, let's do it again."

OUTCOME_SHOT_USER = 'An example of outcome-based praise is: "Great job! You are a genius!"'
OUTCOME_SHOT_ASSISTANT = 'An output json format is: {"effort": [], "outcome": ["Great job"]}'
EFFORT_SHOT_USER = (
    'An example of effort-based praise is: "You are almost there! I am proud of how you are '
    'persevering through and striving to solve the problem. Keep going!"'
)
EFFORT_SHOT_ASSISTANT = (
    'An output json format is: {"effort": ["persevering through and striving to solve the problem", '
    '"Keep going"], "outcome": []}'
)

CORRECTIVE_TURN = (
    'That reply was not in the expected format. Reply with only a JSON object of the form '
    '{"effort": [...], "outcome": [...]} where each list contains phrases quoted from the '
    "tutor response."
)


def conversation_prefix() -> tuple[ChatMessage, ...]:
    """The fixed conversation up to (and excluding) the tutor response turn."""
    return (
        ChatMessage("system", SYSTEM_INSTRUCTION),
        ChatMessage("user", LESSON_PRINCIPLE),
        ChatMessage("assistant", ASK_FOR_RESPONSE),
        ChatMessage("user", OUTCOME_SHOT_USER),
        ChatMessage("assistant", OUTCOME_SHOT_ASSISTANT),
        ChatMessage("user", NEXT_ROUND),
        ChatMessage("assistant", ASK_FOR_RESPONSE_AGAIN),
        ChatMessage("user", EFFORT_SHOT_USER),
        ChatMessage("assistant", EFFORT_SHOT_ASSISTANT),
        ChatMessage("user", NEXT_ROUND),
        ChatMessage("assistant", ASK_FOR_RESPONSE),
    )


@dataclass(frozen=True)
class PromptBundle:
    messages: tuple[ChatMessage, ...]
    lesson_principle: str


def build_highlight_prompt(response_text: str) -> PromptBundle:
    if not response_text:
        raise EmptyResponseError("cannot build a prompt for an empty response")
    messages = conversation_prefix() + (ChatMessage("user", response_text),)
    return PromptBundle(messages=messages, lesson_principle=LESSON_PRINCIPLE)


@dataclass(frozen=True)
class ExtractionResult:
    """Phrase lists parsed from raw model output, phrases kept verbatim."""

    effort_phrases: tuple[str, ...]
    outcome_phrases: tuple[str, ...]
    raw_output: str

    def phrases(self, praise_type: PraiseType) -> tuple[str, ...]:
        return self.effort_phrases if praise_type is PraiseType.EFFORT else self.outcome_phrases

    def to_json(self) -> str:
        return json.dumps(
            {"effort": list(self.effort_phrases), "outcome": list(self.outcome_phrases)},
            ensure_ascii=False,
        )


def parse_extraction(raw: str) -> ExtractionResult:
    """Pull the first JSON object out of raw model output.

    Tolerates prose and code fences around the object; requires keys
    "effort" and "outcome", each a list of strings.
    """
    decoder = json.JSONDecoder()
    obj = None
    for start in range(len(raw)):
        if raw[start] != "{":
            continue
        try:
            candidate, _ = decoder.raw_decode(raw, start)
        except json.JSONDecodeError:
            continue
        if isinstance(candidate, dict):
            obj = candidate
            break
    if obj is None:
        raise NoObjectFoundError(f"no JSON object in model output: {raw[:80]!r}")
    phrase_lists: dict[str, tuple[str, ...]] = {}
    for key in ("effort", "outcome"):
        if key not in obj:
            raise SchemaViolationError(f"model output lacks key {key!r}")
        value = obj[key]
        if not isinstance(value, list) or any(not isinstance(item, str) for item in value):
            raise SchemaViolationError(f"key {key!r} must map to a list of strings")
        phrase_lists[key] = tuple(value)
    return ExtractionResult(
        effort_phrases=phrase_lists["effort"],
        outcome_phrases=phrase_lists["outcome"],
        raw_output=raw,
    )


@dataclass(frozen=True)
class AlignmentReport:
    """Spans located for extracted phrases, plus the phrases that were not found."""

    spans: frozenset[TypedSpan]
    failures: tuple[tuple[PraiseType, str], ...]


def align_extraction(response: AnnotatedResponse, extraction: ExtractionResult) -> AlignmentReport:
    """Locate each extracted phrase in the response, left to right per type.

    A moving cursor per praise type consumes occurrences in output order so a
    repeated phrase maps to successive occurrences; if a phrase is not found
    at or after the cursor, the search wraps to the start once. Phrases that
    still cannot be located are recorded as failures (hallucinated content),
    not dropped silently.
    """
    spans: set[TypedSpan] = set()
    failures: list[tuple[PraiseType, str]] = []
    for ptype in PraiseType:
        cursor = 0
        for phrase in extraction.phrases(ptype):
            match = locate_phrase(response.tokens, phrase, cursor)
            if match is None and cursor > 0:
                match = locate_phrase(response.tokens, phrase, 0)
            if match is None:
                failures.append((ptype, phrase))
                continue
            spans.add(TypedSpan(ptype, match.start, match.end))
            cursor = match.end
    return AlignmentReport(spans=frozenset(spans), failures=tuple(failures))


# -- chat clients -------------------------------------------------------------

class ChatClient(Protocol):
    def chat(self, messages: Sequence[ChatMessage]) -> str:
        """Return the assistant's reply text for the given conversation."""


def request_digest(messages: Sequence[ChatMessage]) -> str:
    """Stable key for a request: sha256 of the canonical message JSON."""
    payload = json.dumps(
        [{"content": m.content, "role": m.role} for m in messages],
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ClientConfig:
    """Connection settings for a chat-completion provider."""

    endpoint: str
    model_id: str
    api_key: str = ""
    temperature: float = 0.0
    timeout: float = 30.0
    max_retries: int = 2
    rate_limit: float | None = None  # max requests per second
    backoff_base: float = 0.5

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.rate_limit is not None and self.rate_limit <= 0:
            raise ValueError("rate_limit must be positive when set")

    @classmethod
    def from_env(cls, **overrides) -> "ClientConfig":
        """Read endpoint/model/key from PRAISEKIT_ENDPOINT / _MODEL / _API_KEY."""
        settings = dict(
            endpoint=os.environ.get("PRAISEKIT_ENDPOINT", "https://api.openai.com/v1/chat/completions"),
            model_id=os.environ.get("PRAISEKIT_MODEL", "gpt-3.5-turbo-0125"),
            api_key=os.environ.get("PRAISEKIT_API_KEY", ""),
        )
        settings.update(overrides)
        return cls(**settings)


class _RateLimiter:
    """Spaces calls at least 1/rate seconds apart; safe across threads."""

    def __init__(self, rate: float | None, sleep: Callable[[float], None]):
        self._interval = 1.0 / rate if rate else 0.0
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def wait(self) -> None:
        if not self._interval:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next_slot - now
            self._next_slot = max(self._next_slot, now) + self._interval
        if delay > 0:
            self._sleep(delay)


class HttpChatClient:
    """Speaks the role/content chat-completion wire protocol over HTTP.

    Retries transport errors, 429s, and 5xx responses with exponential
    backoff (honoring Retry-After when the provider sends one); auth
    failures are raised immediately.
    """

    def __init__(
        self,
        config: ClientConfig,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.config = config
        self._sleep = sleep
        self._limiter = _RateLimiter(config.rate_limit, sleep)
        headers = {}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        self._client = httpx.Client(timeout=config.timeout, headers=headers, transport=transport)

    def close(self) -> None:
        self._client.close()

    def chat(self, messages: Sequence[ChatMessage]) -> str:
        payload = {
            "model": self.config.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": self.config.temperature,
        }
        attempts = self.config.max_retries + 1
        last_error: Exception = ProviderError("no attempt made")
        for attempt in range(attempts):
            self._limiter.wait()
            response = None
            try:
                response = self._client.post(self.config.endpoint, json=payload)
            except httpx.TimeoutException as exc:
                last_error = ProviderTimeoutError(f"provider timed out: {exc}")
            except httpx.TransportError as exc:
                last_error = ProviderError(f"transport failure: {exc}")
            else:
                if response.status_code in (401, 403):
                    raise AuthFailureError(f"provider rejected credentials (HTTP {response.status_code})")
                if response.status_code == 429:
                    last_error = RateLimitedError("provider rate limit (HTTP 429)")
                elif response.status_code >= 500:
                    last_error = ProviderError(f"provider error (HTTP {response.status_code})")
                elif response.status_code >= 400:
                    raise ProviderError(f"provider refused request (HTTP {response.status_code}): {response.text[:200]}")
                else:
                    return self._reply_text(response)
            if attempt + 1 < attempts:
                self._sleep(self._retry_delay(attempt, response))
        raise last_error

    def _retry_delay(self, attempt: int, response: httpx.Response | None) -> float:
        if response is not None:
            retry_after = response.headers.get("Retry-After")
            if retry_after:
                try:
                    return max(0.0, float(retry_after))
                except ValueError:
                    pass
        return self.config.backoff_base * (2 ** attempt)

    @staticmethod
    def _reply_text(response: httpx.Response) -> str:
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed provider response: {exc}") from None
        if not isinstance(text, str):
            raise ProviderError("provider reply content is not text")
        return text


class ReplayChatClient:
    """Serves recorded assistant replies keyed by request digest.

    Fixture files are JSON objects mapping digest -> reply text, so a replay
    run is hermetic and byte-reproducible.
    """

    def __init__(self, fixtures: Mapping[str, str]):
        self._fixtures = dict(fixtures)

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayChatClient":
        with open(path, "r", encoding="utf-8") as handle:
            fixtures = json.load(handle)
        if not isinstance(fixtures, dict) or any(not isinstance(v, str) for v in fixtures.values()):
            raise ValueError(f"fixture file {path} must map digest strings to reply strings")
        return cls(fixtures)

    def chat(self, messages: Sequence[ChatMessage]) -> str:
        digest = request_digest(messages)
        try:
            return self._fixtures[digest]
        except KeyError:
            last_user = next((m.content for m in reversed(messages) if m.role == "user"), "")
            raise MissingFixtureError(
                f"no recorded reply for digest {digest[:12]}... (last user turn: {last_user[:60]!r})"
            ) from None


class RecordingChatClient:
    """Wraps a live client and captures digest -> reply pairs for replay files."""

    def __init__(self, inner: ChatClient):
        self._inner = inner
        self.recorded: dict[str, str] = {}

    def chat(self, messages: Sequence[ChatMessage]) -> str:
        reply = self._inner.chat(messages)
        self.recorded[request_digest(messages)] = reply
        return reply

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.recorded, handle, ensure_ascii=False, indent=2, sort_keys=True)
            handle.write("\n")


def extract_praise(client: ChatClient, response: AnnotatedResponse) -> AlignmentReport:
    """Prompt, parse, and align for one response.

    On malformed output the client is re-asked once with a corrective turn
    appended; a second malformed reply raises ExtractionError.
    """
    bundle = build_highlight_prompt(response.text)
    raw = client.chat(bundle.messages)
    try:
        extraction = parse_extraction(raw)
    except (NoObjectFoundError, SchemaViolationError):
        retry_messages = bundle.messages + (
            ChatMessage("assistant", raw if raw else "(empty reply)"),
            ChatMessage("user", CORRECTIVE_TURN),
        )
        raw_retry = client.chat(retry_messages)
        try:
            extraction = parse_extraction(raw_retry)
        except (NoObjectFoundError, SchemaViolationError) as exc:
            raise ExtractionError(
                f"response {response.id!r}: output unparseable even after corrective re-ask: {exc}"
            ) from exc
    return align_extraction(response, extraction)


def phrase_token_count(phrase: str) -> int:
    return len(tokenize(phrase))
