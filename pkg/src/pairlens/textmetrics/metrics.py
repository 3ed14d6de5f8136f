"""Structural, lexical-diversity and readability metrics for short titles."""

from __future__ import annotations

import math

from .tokens import TextMetricError, lexical_tokens, sentence_count, syllables, words

MTLD_THRESHOLD = 0.72


def structural(title: str) -> dict[str, float]:
    toks = words(title)
    if not toks:
        raise TextMetricError("empty input")
    n_words = len(toks)
    chars = sum(1 for ch in title if not ch.isspace())
    alpha = sum(1 for ch in title if ch.isalpha())
    return {
        "chars": chars,
        "words": n_words,
        "avg_word_len": alpha / n_words,
        "avg_sent_len": n_words / sentence_count(title),
    }


def _mtld_pass(tokens: list[str], threshold: float) -> float:
    factors = 0.0
    seen: set[str] = set()
    count = 0
    ttr = 1.0
    for tok in tokens:
        seen.add(tok)
        count += 1
        ttr = len(seen) / count
        if ttr <= threshold:
            factors += 1
            seen.clear()
            count = 0
            ttr = 1.0
    if count:
        factors += (1 - ttr) / (1 - threshold)
    # a text whose running TTR never leaves 1.0 counts as one full factor
    if factors == 0:
        return float(len(tokens))
    return len(tokens) / factors


def mtld(tokens: list[str], threshold: float = MTLD_THRESHOLD) -> float:
    if not tokens:
        raise TextMetricError("no tokens")
    forward = _mtld_pass(tokens, threshold)
    backward = _mtld_pass(tokens[::-1], threshold)
    return (forward + backward) / 2


def lexical_diversity(title: str) -> dict[str, float]:
    tokens = lexical_tokens(title)
    if not tokens:
        raise TextMetricError("no tokens after normalization")
    n = len(tokens)
    t = len(set(tokens))
    return {"ttr": t / n, "cttr": t / math.sqrt(2 * n), "mtld": mtld(tokens)}


def readability(title: str) -> dict[str, float]:
    """ARI, Coleman-Liau, Flesch-Kincaid grade, negated Flesch ease and Gunning fog."""
    tokens = lexical_tokens(title)
    if not tokens:
        raise TextMetricError("no tokens after normalization")
    w = len(tokens)
    s = sentence_count(title)
    c = sum(1 for ch in title if ch.isalnum())
    letters = sum(1 for ch in title if ch.isalpha())
    syl = [syllables(tok) for tok in tokens]
    y = sum(syl)
    complex_words = sum(1 for k in syl if k >= 3)

    wps = w / s
    ari = 4.71 * (c / w) + 0.5 * wps - 21.43
    cli = 0.0588 * (100 * letters / w) - 0.296 * (100 * s / w) - 15.8
    fk = 0.39 * wps + 11.8 * (y / w) - 15.59
    fre = 206.835 - 1.015 * wps - 84.6 * (y / w)
    fog = 0.4 * (wps + 100 * complex_words / w)
    return {
        "ari": ari,
        "cli": cli,
        "fk_grade": fk,
        "fr_ease_reversed": -fre,
        "gunning_fog": fog,
    }
