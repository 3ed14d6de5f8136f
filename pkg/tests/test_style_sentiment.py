import json
import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairlens.textmetrics import default_lexicons, lexicon_sentiment_binary, stylistic_flags, vader_scores
from pairlens.textmetrics.vader import token_valences

LEX = default_lexicons()
ORACLE = json.loads((Path(__file__).parent / "fixtures" / "vader_oracle.json").read_text(encoding="utf-8"))


def test_stylistic_examples():
    f = stylistic_flags("WOW this is GREAT!", LEX)
    assert f["uppercase"] == 1 and f["excl_mark"] == 1
    assert stylistic_flags("sooooo good", LEX)["repeated_chars"] == 1
    assert all(v == 0 for v in stylistic_flags("calm title here", LEX).values())


def test_stylistic_details():
    assert stylistic_flags("He said 'never again' today", LEX)["quotation_mark"] == 1
    assert stylistic_flags("don't stop", LEX)["quotation_mark"] == 0
    assert stylistic_flags("Top 10 picks", LEX)["numbers"] == 1
    assert stylistic_flags("so good ❤️", LEX)["emoji"] == 1
    assert stylistic_flags("the NBA finals", LEX)["uppercase"] == 1
    assert stylistic_flags("the NY finals", LEX)["uppercase"] == 0
    assert stylistic_flags("1000 views...", LEX)["repeated_chars"] == 0
    assert stylistic_flags("why is this", LEX)["interrogatives"] == 1
    assert stylistic_flags("what did YOU do", LEX)["pronouns"] == 1


def test_lexicon_binary():
    assert lexicon_sentiment_binary("happy", LEX)["tb_polarity"] == 1
    assert lexicon_sentiment_binary("so terrified.", LEX)["nrc_emotion"] == 1
    assert all(v == 0 for v in lexicon_sentiment_binary("river bridge station", LEX).values())


def test_vader_closed_form_cases():
    s = vader_scores("river bridge", LEX.valence)
    assert s["compound"] == 0 and s["neu"] == 1.0
    s = vader_scores("accomplished", LEX.valence)
    assert s["compound"] == pytest.approx(1.9 / math.sqrt(1.9**2 + 15), abs=1e-4)
    assert s["compound"] == pytest.approx(0.4404, abs=1e-4)


def test_vader_parity_with_reference_oracle():
    assert len(ORACLE) == 30
    agree = 0
    for row in ORACLE:
        got = vader_scores(row["title"], LEX.valence)
        assert abs(got["compound"] - row["compound"]) <= 0.05, row["title"]
        agree += (got["compound"] > 0) - (got["compound"] < 0) == (row["compound"] > 0) - (row["compound"] < 0)
        for k in ("pos", "neu", "neg"):
            assert got[k] == pytest.approx(row[k], abs=1e-3), (row["title"], k)
    assert agree >= 28


def test_negation_and_booster():
    plain = vader_scores("good", LEX.valence)["compound"]
    assert vader_scores("not good", LEX.valence)["compound"] < 0
    assert vader_scores("very good", LEX.valence)["compound"] > plain
    assert vader_scores("GOOD news everyone", LEX.valence)["compound"] > vader_scores("good news everyone", LEX.valence)["compound"]
    assert vader_scores("good!!", LEX.valence)["compound"] > plain


title_st = st.lists(st.sampled_from(["good", "bad", "not", "very", "GREAT", "awful", "river", "the", "!", "love", "hate", "?"]), min_size=1, max_size=10).map(" ".join)


@given(title_st)
def test_vader_bounds_and_sign(title):
    s = vader_scores(title, LEX.valence)
    assert -1 <= s["compound"] <= 1
    total = sum(token_valences(title, LEX.valence))
    # punctuation amplification moves the sum away from zero, never across it
    assert (s["compound"] > 0) == (total > 0)
    assert (s["compound"] < 0) == (total < 0)
    assert s["pos"] + s["neu"] + s["neg"] == pytest.approx(1.0, abs=1e-3)


@given(st.text(max_size=40))
def test_flags_pure_and_binary(title):
    a = stylistic_flags(title, LEX) | lexicon_sentiment_binary(title, LEX)
    b = stylistic_flags(title, LEX) | lexicon_sentiment_binary(title, LEX)
    assert a == b
    assert set(a.values()) <= {0, 1}
