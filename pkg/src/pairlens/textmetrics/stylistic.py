"""Binary stylistic and lexicon-presence flags."""

from __future__ import annotations

import re

from .lexicons import SENTIMENT_LEXICONS, WORD_CLASSES, WordLists
from .tokens import lexical_tokens, strip_punct

STYLE_FLAGS = (
    "excl_mark",
    "question_mark",
    "quotation_mark",
    "numbers",
    "emoji",
    "uppercase",
    "repeated_chars",
) + WORD_CLASSES

EMOJI_RANGES = ((0x1F300, 0x1FAFF), (0x2600, 0x27BF), (0xFE0F, 0xFE0F))

_DOUBLE_QUOTES = frozenset('"“”„«»')
_SINGLE_QUOTED = re.compile(r"(?:^|\s)['‘][^'‘’\s][^'‘’]*['’](?=\s|$|[.,;:!?)])")
# letters only: "1000" or "..." are not intensity markers
_REPEAT = re.compile(r"([^\W\d_])\1\1", re.UNICODE)


def _is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in EMOJI_RANGES)


def has_quotation(title: str) -> bool:
    return any(ch in _DOUBLE_QUOTES for ch in title) or bool(_SINGLE_QUOTED.search(title))


def stylistic_flags(title: str, lexicons: WordLists) -> dict[str, int]:
    raw = title.split()
    stripped = [strip_punct(t) for t in raw]
    tokens = set(lexical_tokens(title))
    flags = {
        "excl_mark": "!" in title,
        "question_mark": "?" in title,
        "quotation_mark": has_quotation(title),
        "numbers": any(ch.isdecimal() for ch in title),
        "emoji": any(_is_emoji(ch) for ch in title),
        "uppercase": any(len(t) >= 3 and t.isalpha() and t.isupper() for t in stripped),
        "repeated_chars": any(_REPEAT.search(t) for t in raw),
    }
    for name in WORD_CLASSES:
        flags[name] = not tokens.isdisjoint(lexicons.classes.get(name, ()))
    return {k: int(v) for k, v in flags.items()}


def lexicon_sentiment_binary(title: str, lexicons: WordLists) -> dict[str, int]:
    tokens = set(lexical_tokens(title))
    return {
        name: int(not tokens.isdisjoint(lexicons.sentiment.get(name, ())))
        for name in SENTIMENT_LEXICONS
    }
