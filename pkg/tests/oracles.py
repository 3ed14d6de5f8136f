"""Independent reference implementations shared by the unit tests and the acceptance gate."""

import itertools
import math
import random
import string
import unicodedata
from pathlib import Path


FIXTURES = Path(__file__).parent / "fixtures"


# -- edit distance ---------------------------------------------------------------

def dp_distance(a: str, b: str) -> int:
    """Full DP matrix: insert/delete 1, substitute 2."""
    prev = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        cur = [i] + [0] * len(b)
        for j in range(1, len(b) + 1):
            sub = prev[j - 1] + (0 if a[i - 1] == b[j - 1] else 2)
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, sub)
        prev = cur
    return prev[-1]


def dp_ratio(a: str, b: str) -> int:
    total = len(a) + len(b)
    if total == 0:
        return 100
    return int(round(100 * (total - dp_distance(a, b)) / total))


def random_pairs(n=1000, seed=1234):
    rng = random.Random(seed)
    alphabet = "abcde fgXY!é"
    out = []
    for _ in range(n):
        la, lb = rng.randint(0, 20), rng.randint(0, 20)
        a = "".join(rng.choice(alphabet) for _ in range(la))
        b = "".join(rng.choice(alphabet) for _ in range(lb))
        out.append((a, b))
    return out


# -- title metrics (plug-in formulas) ----------------------------------------------

def load_titles():
    return [t for t in (FIXTURES / "titles_100.txt").read_text(encoding="utf-8").splitlines() if t]


def _punct(ch):
    return ch in string.punctuation or unicodedata.category(ch)[0] in "PS"


def oracle_tokens(title):
    toks = []
    for raw in title.lower().split():
        chars = list(raw)
        while chars and _punct(chars[0]):
            chars.pop(0)
        while chars and _punct(chars[-1]):
            chars.pop()
        if chars:
            toks.append("".join(chars))
    return toks


def oracle_sentences(title):
    n, has_content = 0, False
    for ch in title + ".":
        if ch in ".!?":
            if has_content:
                n += 1
            has_content = False
        elif ch.isalnum():
            has_content = True
    return max(n, 1)


def oracle_syllables(word):
    letters = [c for c in word.lower() if "a" <= c <= "z"]
    if not letters:
        return 1
    groups, prev_vowel = 0, False
    for c in letters:
        v = c in "aeiouy"
        if v and not prev_vowel:
            groups += 1
        prev_vowel = v
    if letters[-1] == "e" and groups > 1:
        groups -= 1
    return max(groups, 1)


def oracle_readability(title):
    toks = oracle_tokens(title)
    W = len(toks)
    S = oracle_sentences(title)
    C = sum(c.isalnum() for c in title)
    L = sum(c.isalpha() for c in title)
    syl = [oracle_syllables(t) for t in toks]
    Y = sum(syl)
    W3 = sum(s >= 3 for s in syl)
    return {
        "ari": 4.71 * C / W + 0.5 * W / S - 21.43,
        "cli": 0.0588 * (L / W * 100) - 0.296 * (S / W * 100) - 15.8,
        "fk_grade": 0.39 * W / S + 11.8 * Y / W - 15.59,
        "fr_ease_reversed": -(206.835 - 1.015 * W / S - 84.6 * Y / W),
        "gunning_fog": 0.4 * (W / S + 100 * W3 / W),
    }


def oracle_diversity(title):
    toks = oracle_tokens(title)
    n, t = len(toks), len(set(toks))
    return {"ttr": t / n, "cttr": t / math.sqrt(2 * n)}


# -- signed-rank null by brute force ---------------------------------------------

def enumerate_signed_rank_p(diffs):
    """Two-sided p by flipping every sign: P(min(W+, W-) <= observed)."""
    d = [x for x in diffs if x != 0]
    mags = [abs(x) for x in d]
    ranks = [sum(m < x for m in mags) + (sum(m == x for m in mags) + 1) / 2 for x in mags]
    total = sum(ranks)
    w_obs = min(sum(r for r, x in zip(ranks, d) if x > 0), sum(r for r, x in zip(ranks, d) if x < 0))
    hits = 0
    for signs in itertools.product((0, 1), repeat=len(d)):
        wp = sum(r for r, s in zip(ranks, signs) if s)
        hits += min(wp, total - wp) <= w_obs + 1e-9
    return hits / 2 ** len(d)
