import numpy as np
import pytest

from pairlens.ingest import PostRecord
from pairlens.pairing import BY_SCORE, SIMILAR, make_pair
from pairlens.stats import GROUP1_LARGER, BatteryConfig, read_reports, run_metric_battery, write_reports
from pairlens.stats.battery import INCONCLUSIVE, StatReport, conclude


def _pairs_and_features(n, shift, seed=0):
    rng = np.random.default_rng(seed)
    feats, pairs = {}, []
    for i in range(n):
        a = PostRecord(f"a{i}", "s", "t a", 0, 100, "x", video_views=1)
        b = PostRecord(f"b{i}", "s", "t b", 1, 1, "y", video_views=1)
        feats[a.post_id] = {"words": float(rng.normal(8 + shift, 2)), "flag": int(rng.random() < 0.3 + shift / 10)}
        feats[b.post_id] = {"words": float(rng.normal(8, 2)), "flag": int(rng.random() < 0.3)}
        pairs.append(make_pair(a, b, SIMILAR, BY_SCORE))
    return pairs, feats


CFG = BatteryConfig(continuous=("words",), binary=("flag",))


def test_planted_shift_detected():
    pairs, feats = _pairs_and_features(3000, 2.0)
    reps = {(r.metric_name, r.test): r for r in run_metric_battery(pairs, feats, CFG)}
    for test in ("paired_t", "wilcoxon"):
        r = reps[("words", test)]
        assert r.passes_bonferroni and r.direction == GROUP1_LARGER and r.conclusion == GROUP1_LARGER
        assert r.alpha_corrected == pytest.approx(0.001 / 22)
    assert reps[("flag", "mcnemar")].passes_bonferroni
    assert reps[("flag", "mcnemar")].alpha_corrected == pytest.approx(0.001 / 16)


def test_null_mostly_fails():
    fails = 0
    for s in range(20):
        pairs, feats = _pairs_and_features(500, 0.0, seed=s)
        fails += sum(not r.passes_bonferroni for r in run_metric_battery(pairs, feats, CFG))
    assert fails / 60 >= 0.95


def test_identical_titles_skipped():
    pairs, feats = _pairs_and_features(50, 0.0)
    for f in feats.values():
        f["words"] = 5.0
        f["flag"] = 1
    reps = run_metric_battery(pairs, feats, CFG)
    assert all(r.skipped and not r.passes_bonferroni and r.conclusion == INCONCLUSIVE for r in reps)


def test_report_invariants_and_roundtrip(tmp_path):
    pairs, feats = _pairs_and_features(300, 0.5)
    reps = run_metric_battery(pairs, feats, BatteryConfig(continuous=("words",), binary=("flag",), normality=True))
    assert [(r.metric_name, r.test) for r in reps] == sorted((r.metric_name, r.test) for r in reps)
    for r in reps:
        assert 0 <= r.p_value <= 1
        assert r.passes_bonferroni == (r.p_value < r.alpha_corrected)
    write_reports(tmp_path / "r.json", reps)
    assert read_reports(tmp_path / "r.json") == reps


def _rep(test, p, direction, eff=None):
    return StatReport("m", test, 1.0, p, direction, eff, 100, p < 0.01, 0.01)


def test_conclusion_rule():
    assert conclude(_rep("paired_t", 1e-9, GROUP1_LARGER), _rep("wilcoxon", 1e-9, GROUP1_LARGER, 0.3)) == GROUP1_LARGER
    # direction disagreement
    assert conclude(_rep("paired_t", 1e-9, GROUP1_LARGER), _rep("wilcoxon", 1e-9, "group1_smaller", 0.3)) == INCONCLUSIVE
    # tiny effect, as with a significant but negligible r_rb
    assert conclude(_rep("paired_t", 1e-9, GROUP1_LARGER), _rep("wilcoxon", 1e-9, GROUP1_LARGER, 0.05)) == INCONCLUSIVE
