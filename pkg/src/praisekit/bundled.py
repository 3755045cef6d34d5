"""Paths to the data files that ship with the package.

The mini corpus holds the three worked-example responses with expert gold
spans; the fixture files hold the recorded model outputs for them (one file
per model, plus a demo file with extra entries for the trainer UI).
"""
from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .annotation import Corpus, load_corpus_file


def _data_dir() -> Path:
    return Path(str(files("praisekit").joinpath("data")))


def mini_corpus_path() -> Path:
    return _data_dir() / "mini_corpus.jsonl"


def fixture_path(name: str) -> Path:
    """name is one of: gpt35, gpt4, demo."""
    return _data_dir() / "fixtures" / f"{name}.json"


def template_dir() -> Path:
    return _data_dir() / "templates"


def load_mini_corpus() -> Corpus:
    return load_corpus_file(mini_corpus_path())
