import hashlib
import json

import numpy as np
import pytest

from pairlens.ingest import post_from_json
from pairlens.pairing import video_ld
from pairlens.stats import powerlaw_fit
from pairlens.synthgen import (
    KNOB_MOMENTS,
    SynthConfig,
    TitleGrammar,
    generate_world,
    sample_subreddit_sizes,
    sample_views,
    title_effect,
)

SMALL = SynthConfig(seed=5, n_subreddits=3, posts_per_subreddit=800, n_videos=3000)


@pytest.fixture(scope="module")
def world():
    return generate_world(SMALL)


def _digest(d):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(d.iterdir())}


def test_same_seed_byte_identical(tmp_path, world):
    world.write(tmp_path / "a")
    generate_world(SMALL).write(tmp_path / "b")
    assert _digest(tmp_path / "a") == _digest(tmp_path / "b")
    other = generate_world(SynthConfig(seed=6, n_subreddits=3, posts_per_subreddit=800, n_videos=3000))
    assert other.posts != world.posts


def test_copy_title_fraction(world):
    joined = world.joined_posts()
    copies = sum(video_ld(p) >= 95 for p in joined)
    assert copies / len(joined) == pytest.approx(0.21, abs=0.01)
    assert world.ground_truth["n_copy_titles"] == round(0.21 * world.ground_truth["n_video_posts"])


def test_schema_matches_ingest(world):
    for row in world.posts[:200]:
        post_from_json(row)
    v = world.videos[0]
    assert set(v) == {"video_id", "title", "views", "category", "tags"}
    assert all(r["score"] >= 0 and isinstance(r["score"], int) for r in world.posts)
    gt = json.loads(json.dumps(world.ground_truth))
    assert gt["config"]["title_effect_weights"] == {"words": 0.8, "sentiment": 0.6}


@pytest.mark.parametrize("which,alpha", [("views", 1.11), ("subreddits", 1.84)])
def test_power_law_targets_at_50k(which, alpha):
    cfg = SynthConfig(seed=11)
    rng = np.random.default_rng(11)
    if which == "views":
        x, x_min = sample_views(cfg, 50_000, rng), cfg.views_x_min
    else:
        x, x_min = sample_subreddit_sizes(cfg, 50_000, rng), cfg.subreddit_size_x_min
    # integer rounding can pull a draw just under x_min
    fit = powerlaw_fit(np.maximum(x, x_min), x_min)
    assert abs(fit.alpha - alpha) <= 0.02


def test_title_effect_is_standardized():
    g = TitleGrammar()
    rng = np.random.default_rng(0)
    vals = [title_effect(g.knobs(rng), {"words": 1.0}) for _ in range(20_000)]
    assert np.mean(vals) == pytest.approx(0.0, abs=0.03)
    assert np.std(vals) == pytest.approx(1.0, abs=0.03)
    assert set(KNOB_MOMENTS) >= {"words", "sentiment"}


def test_null_config_and_validation():
    n = SMALL.null()
    assert n.title_effect_weights == {} and n.rewrite_bonus == 0.0
    with pytest.raises(ValueError):
        SynthConfig(copy_title_fraction=1.5)
    with pytest.raises(ValueError):
        SynthConfig(views_alpha=1.0)
    with pytest.raises(ValueError):
        SynthConfig(title_effect_weights={"nonsense": 1.0})
