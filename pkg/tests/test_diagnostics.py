import math

import numpy as np
import pytest

from pairlens.diagnostics import ld_bin_analysis, time_window_analysis, vvr_interval_analysis, write_rows_csv
from pairlens.ingest import PostRecord
from pairlens.pairing import EXACT, SIMILAR, make_pair


def post(pid, t, score, views=100, title="a title", vtitle="a title"):
    return PostRecord(pid, "s", title, t, score, f"v{pid}", video_views=views, video_category="Music", video_title=vtitle)


def test_time_windows_counts_and_ties():
    pairs = [
        make_pair(post("a", 0, 10), post("b", 600, 5), EXACT, "random"),  # earlier wins
        make_pair(post("c", 0, 1), post("d", 3000, 5), EXACT, "random"),  # later wins
        make_pair(post("e", 0, 4), post("f", 60, 4), EXACT, "random"),  # tie, excluded
    ]
    rows = time_window_analysis(pairs, [1800, 3600])
    assert (rows[0].n_earlier_wins, rows[0].n_later_wins, rows[0].later_win_ratio) == (1, 0, 0.0)
    assert (rows[1].n_earlier_wins, rows[1].n_later_wins, rows[1].later_win_ratio) == (1, 1, 0.5)
    only_ties = time_window_analysis(pairs[2:], [3600])
    assert only_ties[0].later_win_ratio is None and only_ties[0].n_later_wins == 0


def test_time_windows_symmetric_data_near_half():
    rng = np.random.default_rng(0)
    pairs = []
    for i in range(4000):
        s1, s2 = rng.integers(0, 100, 2)
        pairs.append(make_pair(post(f"a{i}", 0, int(s1)), post(f"b{i}", int(rng.integers(1, 3600)), int(s2)), EXACT, "random"))
    (row,) = time_window_analysis(pairs, [3600])
    assert abs(row.later_win_ratio - 0.5) < 0.03


def test_vvr_intervals():
    pairs = [
        make_pair(post("a", 0, 10, views=100), post("b", 1, 4, views=100), SIMILAR, "random"),
        make_pair(post("c", 0, 1, views=150), post("d", 1, 9, views=100), SIMILAR, "random"),
        make_pair(post("e", 0, 9, views=100), post("f", 1, 3, views=180), SIMILAR, "random"),
    ]
    an = vvr_interval_analysis(pairs, [0.5, 1, 2, 4])
    by_lo = {iv.lo: iv for iv in an.intervals}
    assert sum(iv.n for iv in an.intervals) == 3
    assert by_lo[2].n == 0 and by_lo[2].mean_score_diff is None and by_lo[2].win_ratio is None
    assert an.n == 3 and an.spearman is not None


def test_ld_bins_identical_scores_give_p_one():
    posts = [post(f"p{i}", i, 7, title=f"title {i}", vtitle=("title %d" % i) if i % 3 else "zzz qqq") for i in range(60)]
    bins = ld_bin_analysis(posts, "fixed")
    assert len(bins) == 20
    tested = [b for b in bins[:-1] if b.p_vs_reference is not None]
    assert tested and all(b.p_vs_reference == 1.0 for b in tested)
    assert bins[-1].p_vs_reference is None


def test_ld_bins_quantile_sizes():
    rng = np.random.default_rng(1)
    alphabet = list("abcdefgh ")
    posts = []
    for i in range(1000):
        t = "".join(rng.choice(alphabet, 12))
        v = "".join(rng.choice(alphabet, 12))
        posts.append(post(f"p{i}", i, int(rng.integers(0, 50)), title=t, vtitle=v))
    bins = ld_bin_analysis(posts, "quantile")
    assert len(bins) == 5 and all(abs(b.n - 200) <= 1 for b in bins)
    assert all(b.lo <= b.hi for b in bins)


def test_ld_bins_rewrites_score_higher():
    rng = np.random.default_rng(2)
    posts = []
    for i in range(600):
        copy = i % 2 == 0
        title = "the same video title here" if copy else f"my take {i} on it"
        score = int(rng.normal(20 if copy else 40, 5))
        posts.append(post(f"p{i}", i, score, title=title, vtitle="the same video title here"))
    bins = ld_bin_analysis(posts, "fixed")
    low = [b for b in bins if b.p_vs_reference is not None and b.n > 20]
    assert low and all(b.p_vs_reference < 0.001 and b.direction == "group1_larger" for b in low)
    assert all(math.isfinite(b.log10_p) or b.log10_p == -math.inf for b in low)


def test_rows_csv(tmp_path):
    rows = time_window_analysis([make_pair(post("a", 0, 1), post("b", 5, 2), EXACT, "random")], [60.0])
    write_rows_csv(tmp_path / "t.csv", rows)
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "window,n_pairs,n_earlier_wins,n_later_wins,later_win_ratio"
    assert lines[1] == "60.0,1,0,1,1.0"
    with pytest.raises(ValueError):
        ld_bin_analysis([], "weird")
