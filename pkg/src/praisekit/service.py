"""HTTP surface for the trainer UI and batch evaluation.

Endpoints:
- POST /highlight: one tutor response in, highlight segments + feedback out.
- POST /evaluate: a line-delimited corpus in the request body, score report out.
- GET /health: liveness probe.

Replay mode (the default) serves recorded model replies from a fixture file
and never opens a network connection; live mode talks to the configured
chat-completion endpoint. Provider credentials and the endpoint come from
PRAISEKIT_API_KEY / PRAISEKIT_ENDPOINT / PRAISEKIT_MODEL.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import bundled
from .annotation import annotate, load_corpus, span_sort_key
from .errors import ExtractionError, PraiseKitError, ProviderError
from .experiment import run_evaluation, summarize_scores
from .feedback import compose_feedback, load_templates, render_highlight_markup
from .llm import ChatClient, ClientConfig, HttpChatClient, ReplayChatClient, extract_praise
from .metrics import MiouConfig

MAX_RESPONSE_CHARS = 2000


@dataclass
class ServiceSettings:
    default_mode: str = "replay"
    fixtures: Path = field(default_factory=lambda: bundled.fixture_path("demo"))
    alpha: float = 0.2
    model_id: str = field(default_factory=lambda: os.environ.get("PRAISEKIT_MODEL", "gpt-3.5-turbo-0125"))
    cors_origins: tuple[str, ...] = field(
        default_factory=lambda: tuple(os.environ.get("PRAISEKIT_CORS_ORIGINS", "*").split(","))
    )
    live_config: ClientConfig | None = None
    templates_dir: Path | None = None


class HighlightRequest(BaseModel):
    response_text: str = ""
    mode: str | None = None


def create_app(settings: ServiceSettings | None = None) -> FastAPI:
    settings = settings or ServiceSettings()
    app = FastAPI(title="praisekit", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(settings.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    templates = load_templates(settings.templates_dir)
    replay_client = ReplayChatClient.from_file(settings.fixtures)
    clients: dict[str, ChatClient] = {"replay": replay_client}

    def client_for(mode: str) -> ChatClient:
        if mode == "replay":
            return clients["replay"]
        if "live" not in clients:
            config = settings.live_config or ClientConfig.from_env(model_id=settings.model_id)
            clients["live"] = HttpChatClient(config)
        return clients["live"]

    def provider_failure(exc: ProviderError) -> JSONResponse:
        return JSONResponse(
            status_code=502,
            content={"detail": f"provider failure: {exc}", "retry_after_seconds": 1},
            headers={"Retry-After": "1"},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "mode": settings.default_mode}

    @app.post("/highlight")
    def highlight(request: HighlightRequest):
        text = request.response_text
        mode = request.mode or settings.default_mode
        if mode not in ("replay", "live"):
            return JSONResponse(status_code=400, content={"detail": f"unknown mode {mode!r}"})
        if not text.strip():
            return JSONResponse(status_code=400, content={"detail": "response_text must be non-empty"})
        if len(text) > MAX_RESPONSE_CHARS:
            return JSONResponse(
                status_code=400,
                content={"detail": f"response_text exceeds {MAX_RESPONSE_CHARS} characters"},
            )
        response = annotate("request", text)
        try:
            report = extract_praise(client_for(mode), response)
        except ExtractionError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        except ProviderError as exc:
            return provider_failure(exc)
        spans = sorted(report.spans, key=span_sort_key)
        feedback = compose_feedback(spans, response, templates)
        markup = render_highlight_markup(response, spans)
        return {
            "markup": {
                "segments": [{"text": s.text, "style": s.style} for s in markup.segments]
            },
            "feedback": {
                "verdict": feedback.verdict.value,
                "body": feedback.body,
                "cited_spans": [
                    {"praise_type": ptype.value, "text": surface}
                    for ptype, surface in feedback.cited_spans
                ],
            },
            "spans": [
                {
                    "praise_type": s.praise_type.value,
                    "start": s.start,
                    "end": s.end,
                    "text": response.tokens.span_surface(s.start, s.end),
                }
                for s in spans
            ],
            "model_id": settings.model_id,
        }

    @app.post("/evaluate")
    async def evaluate(request: Request):
        body = (await request.body()).decode("utf-8")
        mode = request.query_params.get("mode", settings.default_mode)
        if mode not in ("replay", "live"):
            return JSONResponse(status_code=400, content={"detail": f"unknown mode {mode!r}"})
        try:
            alpha = float(request.query_params.get("alpha", settings.alpha))
            cfg = MiouConfig(alpha=alpha)
            corpus = load_corpus(body)
        except (ValueError, PraiseKitError) as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        try:
            result = run_evaluation(client_for(mode), corpus, cfg)
        except ProviderError as exc:
            return provider_failure(exc)
        summary = {}
        if result.records:
            summary = {
                ptype.value: {
                    "mean": stats.mean,
                    "std": stats.std,
                    "min": stats.min,
                    "max": stats.max,
                }
                for ptype, stats in summarize_scores(result.records).items()
            }
        return {
            "alpha": cfg.alpha,
            "records": [
                {
                    "response_id": r.response_id,
                    "praise_type": r.praise_type.value,
                    "span_miou": r.span_miou,
                    "token_miou": r.token_miou,
                    "f1": r.f1,
                    "iou": r.iou,
                }
                for r in result.records
            ],
            "failures": [{"response_id": f.response_id, "error": f.error} for f in result.failures],
            "summary": summary,
        }

    return app
