"""Reversible word/punctuation tokenizer with byte-span bookkeeping.

Tokens are maximal runs of word characters or single punctuation marks;
whitespace lives only in the gaps between spans. Because every span is
recorded against the source text, any assignment of replacement surfaces
can be rendered back into a complete string, and rendering the original
surfaces reproduces the source byte-for-byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from textprobe.errors import EmptyInput

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)
_WORD_RE = re.compile(r"\w", re.UNICODE)

POS_TAGS = ("noun", "verb", "adj", "adv", "other")


@dataclass(frozen=True)
class Token:
    """One surface token with its byte span in the source text."""

    surface: str
    start: int
    end: int
    pos: str = "other"
    is_stopword: bool = False
    is_frozen: bool = False


@dataclass(frozen=True)
class TokenizedInput:
    """A tokenized text that can be re-rendered with substituted surfaces.

    ``prompt_len`` counts the leading tokens that belong to the prompt
    region (zero when the whole text is treated as the example).
    """

    source: str
    tokens: tuple[Token, ...]
    prompt_len: int = 0
    # Rendering segments derived from the spans: text before the first
    # token, the gap after each token i (the suffix for the last one).
    _prefix: str = field(default="", repr=False, compare=False)
    _trailing: tuple[str, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        raw = self.source.encode("utf-8")
        pieces = []
        pos = 0
        for tok in self.tokens:
            pieces.append(raw[pos:tok.start].decode("utf-8"))
            pos = tok.end
        pieces.append(raw[pos:].decode("utf-8"))
        object.__setattr__(self, "_prefix", pieces[0])
        object.__setattr__(self, "_trailing", tuple(pieces[1:]))

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @property
    def perturbable_count(self) -> int:
        return sum(1 for t in self.tokens if not (t.is_stopword or t.is_frozen))

    def render(self, surfaces: Sequence[str]) -> str:
        """Rebuild a full text from one surface per token position."""
        if len(surfaces) != len(self.tokens):
            raise ValueError(
                f"expected {len(self.tokens)} surfaces, got {len(surfaces)}"
            )
        out = [self._prefix]
        for surf, gap in zip(surfaces, self._trailing):
            out.append(surf)
            out.append(gap)
        return "".join(out)

    def render_without(self, surfaces: Sequence[str], position: int) -> str:
        """Render with the token at ``position`` and its trailing separator removed."""
        if not 0 <= position < len(self.tokens):
            raise IndexError(position)
        out = [self._prefix]
        for i, (surf, gap) in enumerate(zip(surfaces, self._trailing)):
            if i == position:
                continue
            out.append(surf)
            out.append(gap)
        return "".join(out)

    def with_stopwords(self, stopwords: Iterable[str]) -> "TokenizedInput":
        stopset = {w.lower() for w in stopwords}
        tokens = tuple(
            replace(t, is_stopword=True)
            if t.surface.lower() in stopset
            else t
            for t in self.tokens
        )
        return replace(self, tokens=tokens)

    def with_pos(self, tags: Sequence[str]) -> "TokenizedInput":
        if len(tags) != len(self.tokens):
            raise ValueError("one tag per token required")
        for tag in tags:
            if tag not in POS_TAGS:
                raise ValueError(f"unknown pos tag {tag!r}")
        tokens = tuple(replace(t, pos=tag) for t, tag in zip(self.tokens, tags))
        return replace(self, tokens=tokens)

    def with_example_region(
        self, example_span: tuple[int, int], freeze_prompt: bool = True
    ) -> "TokenizedInput":
        """Mark the byte range holding the example; everything else is prompt.

        Prompt tokens are frozen when ``freeze_prompt`` is set, making them
        illegal perturbation targets downstream.
        """
        ex_start, ex_end = example_span
        tokens = []
        n_prompt = 0
        for t in self.tokens:
            inside = ex_start <= t.start and t.end <= ex_end
            if t.start < ex_start:
                n_prompt += 1
            if freeze_prompt and not inside:
                t = replace(t, is_frozen=True)
            tokens.append(t)
        return replace(self, tokens=tuple(tokens), prompt_len=n_prompt)


def tokenize(text: str) -> TokenizedInput:
    """Split ``text`` into word and punctuation tokens with byte spans.

    Punctuation tokens are tagged pos="other" and flagged as stop words.
    Raises :class:`EmptyInput` for a zero-length text.
    """
    if text == "":
        raise EmptyInput("cannot tokenize an empty text")
    # Cumulative byte length per character index, so regex character
    # offsets can be translated into byte offsets in one pass.
    byte_at = [0]
    for ch in text:
        byte_at.append(byte_at[-1] + len(ch.encode("utf-8")))
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group(0)
        is_word = bool(_WORD_RE.match(surface))
        tokens.append(
            Token(
                surface=surface,
                start=byte_at[m.start()],
                end=byte_at[m.end()],
                pos="other",
                is_stopword=not is_word,
            )
        )
    return TokenizedInput(source=text, tokens=tuple(tokens))


def detokenize(inp: TokenizedInput) -> str:
    """Re-insert the original surfaces into their spans."""
    return inp.render(inp.surfaces)


def word_tokens(text: str) -> list[str]:
    """Lowercased word tokens only; shared by the surrogate scorer and PPL model."""
    return [m.group(0).lower() for m in re.finditer(r"\w+", text, re.UNICODE)]
