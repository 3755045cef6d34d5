"""Deterministic tokenization and phrase-to-token alignment.

Tokenization policy:
- A token is a maximal run of letters/digits; apostrophes and hyphens are
  kept when they sit between two such runs ("don't", "self-paced").
- Every other character separates tokens, so punctuation never becomes a
  token on its own.
- Each token records its character range in the source text, and a
  normalized form (lowercased, curly apostrophe folded to ASCII) used for
  case- and punctuation-insensitive phrase matching.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")


def _normalize(surface: str) -> str:
    return surface.replace("’", "'").lower()


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    char_start: int
    char_end: int
    index: int


@dataclass(frozen=True)
class TokenList:
    """Tokens of one response, with enough offsets to rebuild any slice."""

    source_text: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index: int) -> Token:
        return self.tokens[index]

    def normalized(self) -> tuple[str, ...]:
        return tuple(t.normalized for t in self.tokens)

    def span_surface(self, start: int, end: int) -> str:
        """Source text from the first to the last token of [start, end)."""
        if not 0 <= start < end <= len(self.tokens):
            raise IndexError(f"token span [{start}, {end}) out of range 0..{len(self.tokens)}")
        return self.source_text[self.tokens[start].char_start:self.tokens[end - 1].char_end]


@dataclass(frozen=True)
class PhraseMatch:
    start: int
    end: int
    matched_phrase: str


def tokenize(text: str) -> TokenList:
    """Split text into tokens per the policy above; empty text gives no tokens."""
    tokens = tuple(
        Token(
            surface=m.group(0),
            normalized=_normalize(m.group(0)),
            char_start=m.start(),
            char_end=m.end(),
            index=i,
        )
        for i, m in enumerate(_TOKEN_RE.finditer(text))
    )
    return TokenList(source_text=text, tokens=tokens)


def locate_phrase(tokens: TokenList, phrase: str, search_from: int = 0) -> PhraseMatch | None:
    """Find the leftmost token window at or after search_from matching phrase.

    A window matches when its normalized tokens equal the normalized
    tokenization of the phrase, making the comparison case- and
    punctuation-insensitive. Returns None when nothing matches (including
    phrases that tokenize to nothing, e.g. pure punctuation).
    """
    if not 0 <= search_from <= len(tokens):
        raise ValueError(f"search_from {search_from} outside 0..{len(tokens)}")
    needle = tokenize(phrase).normalized()
    if not needle:
        return None
    hay = tokens.normalized()
    for start in range(search_from, len(hay) - len(needle) + 1):
        if hay[start:start + len(needle)] == needle:
            return PhraseMatch(start=start, end=start + len(needle), matched_phrase=phrase)
    return None
