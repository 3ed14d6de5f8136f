"""Tokenization, sentence splitting and syllable counting shared by the metrics."""

from __future__ import annotations

import re
import string
import unicodedata

_SENTENCE_BREAK = re.compile(r"[.!?]+")
_VOWEL_RUN = re.compile(r"[aeiouy]+")


class TextMetricError(ValueError):
    pass


def _is_punct(ch: str) -> bool:
    return ch in string.punctuation or unicodedata.category(ch).startswith(("P", "S"))


def strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def words(text: str) -> list[str]:
    return text.split()


def lexical_tokens(text: str) -> list[str]:
    """Lowercased tokens with edge punctuation removed; internal apostrophes stay."""
    out = []
    for tok in text.lower().split():
        tok = strip_punct(tok)
        if tok:
            out.append(tok)
    return out


def sentence_count(text: str) -> int:
    parts = _SENTENCE_BREAK.split(text)
    n = sum(1 for p in parts if any(ch.isalnum() for ch in p))
    return max(n, 1)


def syllables(word: str) -> int:
    w = "".join(ch for ch in word.lower() if "a" <= ch <= "z")
    if not w:
        return 1
    count = len(_VOWEL_RUN.findall(w))
    if w.endswith("e") and count > 1:
        count -= 1
    return max(count, 1)
