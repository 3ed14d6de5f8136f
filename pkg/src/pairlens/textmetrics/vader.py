"""Rule-based valence scoring in the style of VADER.

Only the rules that matter for short titles are implemented: negation of a
lexicon word by one of the three preceding tokens, booster/dampener words,
ALL-CAPS emphasis in mixed-case text and exclamation-mark amplification.
Idioms, "but" clauses and emoji descriptions are left out.
"""

from __future__ import annotations

import math
import string

B_INCR = 0.293
B_DECR = -0.293
CAPS_INCR = 0.733
NEGATION_SCALAR = -0.74
EXCL_INCR = 0.292
MAX_EXCL = 4
QM_INCR = 0.18
NORM_ALPHA = 15.0

NEGATE = frozenset(
    """aint arent cannot cant couldnt darent didnt doesnt ain't aren't can't couldn't
    daren't didn't doesn't dont hadnt hasnt havent isnt mightnt mustnt neither don't
    hadn't hasn't haven't isn't mightn't mustn't neednt needn't never none nope nor not
    nothing nowhere oughtnt shant shouldnt uhuh wasnt werent oughtn't shan't shouldn't
    uh-uh wasn't weren't without wont wouldnt won't wouldn't rarely seldom despite""".split()
)

_UP = """absolutely amazingly awfully completely considerable considerably decidedly deeply
effing enormous enormously entirely especially exceptional exceptionally extreme extremely
fabulously flipping flippin frackin fracking fricking frickin frigging friggin fully fuckin
fucking fuggin fugging greatly hella highly hugely incredible incredibly intensely major
majorly more most particularly purely quite really remarkably so substantially thoroughly
total totally tremendous tremendously uber unbelievably unusually utter utterly very"""
_DOWN = """almost barely hardly kinda kindof kind-of less little marginal marginally occasional
occasionally partly scarce scarcely slight slightly somewhat sorta sortof sort-of"""
BOOSTERS = {w: B_INCR for w in _UP.split()} | {w: B_DECR for w in _DOWN.split()}


def _strip_if_word(token: str) -> str:
    stripped = token.strip(string.punctuation)
    # two characters or fewer after stripping: probably an emoticon, keep as is
    return token if len(stripped) <= 2 else stripped


def _is_negation(word: str) -> bool:
    return word in NEGATE or "n't" in word


def _booster(word: str, valence: float, cap_diff: bool) -> float:
    scalar = BOOSTERS.get(word.lower(), 0.0)
    if scalar == 0.0:
        return 0.0
    if valence < 0:
        scalar = -scalar
    if word.isupper() and cap_diff:
        scalar += CAPS_INCR if valence > 0 else -CAPS_INCR
    return scalar


def normalize(score: float, alpha: float = NORM_ALPHA) -> float:
    return max(-1.0, min(1.0, score / math.sqrt(score * score + alpha)))


def token_valences(text: str, lexicon: dict[str, float]) -> list[float]:
    tokens = [_strip_if_word(t) for t in text.split()]
    n_caps = sum(1 for t in tokens if t.isupper())
    cap_diff = 0 < len(tokens) - n_caps < len(tokens)
    lowered = [t.lower() for t in tokens]

    out = []
    for i, (tok, low) in enumerate(zip(tokens, lowered)):
        if low in BOOSTERS or low not in lexicon:
            out.append(0.0)
            continue
        if low == "kind" and i + 1 < len(tokens) and lowered[i + 1] == "of":
            out.append(0.0)
            continue
        valence = lexicon[low]
        if tok.isupper() and cap_diff:
            valence += CAPS_INCR if valence > 0 else -CAPS_INCR
        for dist in range(3):
            j = i - dist - 1
            if j < 0 or lowered[j] in lexicon:
                continue
            s = _booster(tokens[j], valence, cap_diff)
            if dist == 1:
                s *= 0.95
            elif dist == 2:
                s *= 0.9
            valence += s
            valence = _negation_check(valence, lowered, dist, i)
        out.append(valence)
    return out


def _negation_check(valence: float, low: list[str], dist: int, i: int) -> float:
    # mirrors the reference rules, including its "<x> so|this <word>" emphasis
    # at the third look-back, which fires whenever the previous token is so/this
    if dist == 1:
        if low[i - 2] == "never" and low[i - 1] in ("so", "this"):
            return valence * 1.25
        if low[i - 2] == "without" and low[i - 1] == "doubt":
            return valence
    elif dist == 2:
        if (low[i - 3] == "never" and low[i - 2] in ("so", "this")) or low[i - 1] in ("so", "this"):
            return valence * 1.25
        if low[i - 3] == "without" and "doubt" in (low[i - 2], low[i - 1]):
            return valence
    if _is_negation(low[i - dist - 1]):
        return valence * NEGATION_SCALAR
    return valence


def _punct_amplifier(text: str) -> float:
    amp = min(text.count("!"), MAX_EXCL) * EXCL_INCR
    qm = text.count("?")
    if qm > 1:
        amp += qm * QM_INCR if qm <= 3 else 0.96
    return amp


def vader_scores(title: str, valence_lexicon: dict[str, float]) -> dict[str, float]:
    """Return ``pos``, ``neu``, ``neg`` proportions and the ``compound`` score."""
    sentiments = token_valences(title, valence_lexicon)
    if not sentiments:
        return {"pos": 0.0, "neu": 1.0, "neg": 0.0, "compound": 0.0}
    total = sum(sentiments)
    amp = _punct_amplifier(title)
    if total > 0:
        total += amp
    elif total < 0:
        total -= amp
    compound = normalize(total)

    pos_sum = sum(s + 1 for s in sentiments if s > 0)
    neg_sum = sum(s - 1 for s in sentiments if s < 0)
    neu_count = sum(1 for s in sentiments if s == 0)
    if pos_sum > abs(neg_sum):
        pos_sum += amp
    elif pos_sum < abs(neg_sum):
        neg_sum -= amp
    denom = pos_sum + abs(neg_sum) + neu_count
    return {
        "pos": abs(pos_sum / denom),
        "neu": abs(neu_count / denom),
        "neg": abs(neg_sum / denom),
        "compound": compound,
    }
