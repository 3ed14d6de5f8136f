import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairlens.ingest import PostRecord
from pairlens.pairing import INVERSE, SIMILAR, BY_SCORE, PairingConfig, make_pair
from pairlens.ranker import (
    EARLIER_POST,
    POST1,
    POST2,
    DegenerateSplitError,
    RankerHyper,
    RankerModel,
    RankerTrainingError,
    SplitSpec,
    ablate_thresholds,
    accuracy,
    baseline_random,
    baseline_time,
    baseline_video_views,
    evaluate_external,
    evaluate_ranker,
    hinge_loss,
    make_split,
    predict,
    predict_pairs,
    read_model,
    train_margin_ranker,
    write_model,
)

JAN_2022 = 1640995200


def post(pid, t, score, vid=None, views=100, title="plain title"):
    return PostRecord(pid, "s", title, t, score, vid or f"v{pid}", video_views=views, video_category="Music", video_title="vt")


def pair(a, b, phase=SIMILAR, ordering=BY_SCORE):
    return make_pair(a, b, phase, ordering)


# -- splits ---------------------------------------------------------------------

def test_date_split_drops_straddlers():
    early = pair(post("a", JAN_2022 - 100, 9), post("b", JAN_2022 - 50, 1))
    late = pair(post("c", JAN_2022 + 5, 9), post("d", JAN_2022 + 9, 1))
    straddle = pair(post("e", JAN_2022 - 5, 9), post("f", JAN_2022 + 5, 1))
    s = make_split([early, late, straddle], SplitSpec("date"))
    assert s.train == [early] and s.test == [late]
    with pytest.raises(DegenerateSplitError):
        make_split([early], SplitSpec("date"))


def _many_pairs(n=200, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        a = post(f"a{i}", int(rng.integers(0, 10**6)), int(rng.integers(21, 99)), vid=f"x{i % 37}")
        b = post(f"b{i}", a.created_at + 3, 0, vid=f"y{i % 41}")
        out.append(pair(a, b))
    return out


@pytest.mark.parametrize("strategy", ["post_id", "video_id"])
def test_id_split_leakage_invariant_and_determinism(strategy):
    pairs = _many_pairs()
    spec = SplitSpec(strategy, seed=3, test_frac=0.1)
    s = make_split(pairs, spec)
    key = (lambda r: r.post_id) if strategy == "post_id" else (lambda r: r.video_id)
    assert all(key(p.post1) in s.sampled or key(p.post2) in s.sampled for p in s.test)
    assert all(key(p.post1) not in s.sampled and key(p.post2) not in s.sampled for p in s.train)
    assert len(s.train) + len(s.test) == len(pairs)
    again = make_split(pairs, spec)
    assert again.sampled == s.sampled and again.test == s.test


def test_post_id_split_one_sampled_id_goes_to_test():
    pairs = _many_pairs(50)
    s = make_split(pairs, SplitSpec("post_id", seed=1))
    some = next(iter(s.sampled))
    assert all(p in s.test for p in pairs if some in (p.post1.post_id, p.post2.post_id))


# -- baselines --------------------------------------------------------------------

def test_random_baseline():
    pairs = _many_pairs(10_000, seed=2)
    accs = [baseline_random(pairs, s) for s in range(100)]
    assert sum(0.48 <= a <= 0.52 for a in accs) >= 99
    assert baseline_random(pairs[:1], 4) in (0.0, 1.0)
    assert baseline_random(pairs, 9) == baseline_random(pairs, 9)


def test_time_baseline_and_ties():
    p = pair(post("a", 0, 50), post("b", 100, 2))
    assert baseline_time([p]) == 1.0
    # equal timestamps: both rules fall back to post1, which by_score ordering makes the winner
    tie = pair(post("a", 7, 2), post("b", 7, 50))
    assert baseline_time([tie], EARLIER_POST) == baseline_time([tie], POST1) == 1.0


def test_views_baseline_on_inverse_pairs_is_zero():
    strict = [pair(post(f"a{i}", i, 50 + i, views=100), post(f"b{i}", i + 1, 1, views=1000 + i), INVERSE) for i in range(20)]
    assert baseline_video_views(strict) == 0.0
    # equal-view pairs are decided by the tie rule alone
    ties = [pair(post(f"c{i}", i + 10 * (i % 2), 50, views=5), post(f"d{i}", 5, 1, views=5), INVERSE) for i in range(10)]
    post1_earlier = sum(p.post1.created_at <= p.post2.created_at for p in ties) / len(ties)
    assert baseline_video_views(ties, EARLIER_POST) == pytest.approx(post1_earlier)
    assert baseline_video_views(strict + ties, EARLIER_POST) == pytest.approx(post1_earlier * 10 / 30)


def test_accuracy_skips_score_ties():
    p = pair(post("a", 0, 5), post("b", 1, 5))
    q = pair(post("c", 0, 9), post("d", 1, 1))
    assert accuracy([p, q], [POST2, POST1]) == 1.0


# -- margin ranker -----------------------------------------------------------------

COLS = ("f1", "f2")


def separable(n=150, seed=0):
    rng = np.random.default_rng(seed)
    feats, pairs = {}, []
    for i in range(n):
        x1, x2 = rng.normal(size=2), rng.normal(size=2)
        w_true = np.array([1.0, -2.0])
        win_first = x1 @ w_true > x2 @ w_true
        a = post(f"a{i}", i, 100 if win_first else 1, title=f"cats run fast {i}")
        b = post(f"b{i}", i + 1, 1 if win_first else 100, title=f"my dog sleeps {i}")
        feats[a.post_id] = dict(zip(COLS, x1))
        feats[b.post_id] = dict(zip(COLS, x2))
        pairs.append(make_pair(a, b, SIMILAR, "random"))
    return pairs, feats


def test_separable_reaches_full_train_accuracy():
    pairs, feats = separable()
    m = train_margin_ranker(pairs, feats, RankerHyper(epochs=50, lr=0.5, l2=0.0), columns=COLS)
    assert evaluate_ranker(m, pairs, feats) == 1.0
    assert m.weights[0] > 0 > m.weights[1]
    hist = m.loss_history
    assert all(b <= a + 1e-6 for a, b in zip(hist, hist[1:]))
    assert all(v >= 0 for v in hist)


def test_zero_margin_zero_loss_at_init():
    pairs, feats = separable(20)
    m = train_margin_ranker(pairs, feats, RankerHyper(margin=0.0, l2=0.0, epochs=3), columns=COLS)
    assert m.loss_history[0] == 0.0
    assert hinge_loss(np.zeros(2), np.ones((4, 2)), 0.0, 0.0) == 0.0


def test_contradictory_pair_gives_half():
    a, b = post("a", 0, 100), post("b", 1, 1)
    a2, b2 = post("a2", 0, 1), post("b2", 1, 100)
    feats = {"a": {"f1": 1.0, "f2": 0.0}, "b": {"f1": 0.0, "f2": 1.0}}
    feats["a2"], feats["b2"] = feats["a"], feats["b"]
    pairs = [make_pair(a, b, SIMILAR, "random"), make_pair(a2, b2, SIMILAR, "random")]
    m = train_margin_ranker(pairs, feats, RankerHyper(epochs=20), columns=COLS)
    assert evaluate_ranker(m, pairs, feats) == 0.5


def _model(w, m=1.0, bias=0.0):
    return RankerModel(weights=list(w), bias=bias, margin=m, feature_means=[0.0, 0.0], feature_sds=[1.0, 1.0], feature_columns=list(COLS))


def test_predict_examples():
    longer = pair(post("a", 5, 9), post("b", 0, 1))
    assert predict(_model([1.0, 0.0]), [12, 0], [6, 0], longer) == POST1
    assert predict(_model([0.0, 0.0]), [12, 0], [6, 0], longer) == POST2  # earlier post wins ties
    assert predict(_model([0.0, 0.0]), [1, 2], [3, 4]) == POST1


@given(
    st.lists(st.floats(-5, 5), min_size=2, max_size=2),
    st.lists(st.floats(-5, 5), min_size=2, max_size=2),
    st.lists(st.floats(-5, 5), min_size=2, max_size=2),
    st.floats(0.01, 100),
)
@settings(max_examples=200)
def test_predict_invariant_to_positive_rescaling(w, x1, x2, c):
    p = pair(post("a", 0, 9), post("b", 1, 1))
    base = _model(w, 1.0, 0.3)
    scaled = _model([c * v for v in w], c, 0.3 * c)
    s1, s2 = base.score(np.array([x1, x2]))
    if abs(s1 - s2) > 1e-9:
        assert predict(base, x1, x2, p) == predict(scaled, x1, x2, p)


def test_training_is_reproducible_and_model_roundtrips(tmp_path):
    pairs, feats = separable(60, seed=4)
    m1 = train_margin_ranker(pairs, feats, RankerHyper(epochs=10), columns=COLS)
    m2 = train_margin_ranker(pairs, feats, RankerHyper(epochs=10), columns=COLS)
    assert m1 == m2
    write_model(tmp_path / "m.json", m1)
    back = read_model(tmp_path / "m.json")
    assert predict_pairs(back, pairs, feats) == predict_pairs(m1, pairs, feats)


def test_zero_variance_column_dropped_and_nonfinite_aborts():
    pairs, feats = separable(30)
    for f in feats.values():
        f["const"] = 3.0
    m = train_margin_ranker(pairs, feats, RankerHyper(epochs=2), columns=(*COLS, "const"))
    assert m.feature_columns == list(COLS) and all(s > 0 for s in m.feature_sds)
    with pytest.raises(RankerTrainingError):
        train_margin_ranker(pairs, feats, RankerHyper(lr=1e308, l2=1.0, epochs=5), columns=COLS)
    with pytest.raises(RankerTrainingError):
        train_margin_ranker(pairs, {}, RankerHyper(), columns=COLS)


# -- external predictions ------------------------------------------------------------

def test_external_eval(tmp_path, caplog):
    pairs = [pair(post(f"a{i}", i, 50), post(f"b{i}", i, 1)) for i in range(4)]
    f = tmp_path / "pred.csv"
    f.write_text("pair_id,winner\n" + "".join(f"{p.pair_id},post1\n" for p in pairs))
    ev = evaluate_external(pairs, f)
    assert ev.accuracy == 1.0 and ev.coverage == 1.0
    f.write_text(f"pair_id,winner\n{pairs[0].pair_id},post1\n{pairs[1].pair_id},post2\nnope__nada,post1\n")
    with caplog.at_level("WARNING"):
        ev = evaluate_external(pairs, f)
    assert ev.coverage == 0.5 and ev.accuracy == 0.5 and ev.n_unknown == 1
    assert "not in the dataset" in caplog.text


# -- ablation ----------------------------------------------------------------------

def test_single_point_ablation_has_no_correlation():
    pairs, feats = separable(80)
    phases = {SIMILAR: pairs, INVERSE: []}
    ab = ablate_thresholds(phases, feats, PairingConfig(score_diff_min=0, score_ratio_min=1, require_multiword=False),
                           ld_pair_grid=(70,), spec=SplitSpec("post_id", test_frac=0.2), hyper=RankerHyper(epochs=5), columns=COLS)
    assert len(ab.rows) == 1 and ab.correlation is None
