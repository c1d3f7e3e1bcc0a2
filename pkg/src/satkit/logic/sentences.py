"""Deterministic rule-based sentence splitting.

A sentence boundary is '.', '!' or '?' followed by whitespace and an
uppercase letter, or by end of text. A configurable abbreviation list
protects tokens like "Dr." from splitting. Joining the output with
single spaces reproduces the input up to inter-sentence whitespace.
"""

from __future__ import annotations

from typing import Iterable

from ..errors import SatkitError

DEFAULT_ABBREVIATIONS = frozenset({"Mr.", "Mrs.", "Dr.", "e.g.", "i.e."})

_TERMINATORS = ".!?"


class EmptyInputError(SatkitError):
    pass


def split_sentences(text: str, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split ``text`` into sentences. Intended for descriptions of up to
    about 450 words; longer input is not rejected, just untested terrain."""
    if not text or not text.strip():
        raise EmptyInputError("input text is empty")
    protect = frozenset(abbreviations)

    sentences = []
    start = 0
    i, n = 0, len(text)
    while i < n:
        if text[i] in _TERMINATORS:
            trailing = text[start : i + 1].split()
            token = trailing[-1] if trailing else ""
            if token in protect:
                i += 1
                continue
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            if j > i + 1 and j < n and text[j].isupper():
                sentences.append(text[start : i + 1].strip())
                start = j
                i = j
                continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
