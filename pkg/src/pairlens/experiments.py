"""End-to-end trials on synthetic worlds, shared by the experiment scripts and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .ingest import PostRecord
from .pairing import PairingConfig, PostPair
from .ranker import (
    STRATEGIES,
    RankerHyper,
    SplitSpec,
    baseline_random,
    build_phase_pairs,
    make_split,
    ranking_dataset,
    evaluate_ranker,
    train_margin_ranker,
)
from .stats.battery import BatteryConfig, StatReport, run_metric_battery
from .synthgen import SynthConfig, World, generate_world
from .textmetrics.features import extract_features
from .textmetrics.lexicons import WordLists, default_lexicons
from .textmetrics.tokens import TextMetricError

ALL_PHASES = ("exact", "similar", "inverse")


def features_for(posts: Iterable[PostRecord], lexicons: WordLists | None = None) -> dict[str, dict[str, float]]:
    lex = lexicons or default_lexicons()
    out = {}
    for p in posts:
        if p.post_id in out:
            continue
        try:
            out[p.post_id] = extract_features(p.title, lex).as_dict()
        except TextMetricError:
            pass
    return out


def pair_posts(pairs: Iterable[PostPair]) -> list[PostRecord]:
    seen: dict[str, PostRecord] = {}
    for p in pairs:
        seen.setdefault(p.post1.post_id, p.post1)
        seen.setdefault(p.post2.post_id, p.post2)
    return [seen[k] for k in sorted(seen)]


@dataclass
class Trial:
    world: World
    posts: list[PostRecord]
    phases: dict[str, list[PostPair]]
    mixed: list[PostPair]
    ranking: list[PostPair]
    features: dict[str, dict[str, float]]


def run_world(cfg: SynthConfig, pairing: PairingConfig | None = None) -> Trial:
    """Generate, join, pair, filter and featurize (features only for posts that occur in pairs)."""
    pairing = pairing or PairingConfig()
    world = generate_world(cfg)
    posts = world.joined_posts()
    phases = build_phase_pairs(posts, pairing)
    mixed = ranking_dataset(phases, pairing, ALL_PHASES)
    ranking = ranking_dataset(phases, pairing)
    feats = features_for(pair_posts(p for ph in phases.values() for p in ph))
    return Trial(world, posts, phases, mixed, ranking, feats)


def battery(trial: Trial, cfg: BatteryConfig | None = None) -> list[StatReport]:
    return run_metric_battery(trial.mixed, trial.features, cfg)


def ranker_accuracy_by_split(
    trial: Trial, hyper: RankerHyper | None = None, strategies: Sequence[str] = STRATEGIES, seed: int = 0
) -> dict[str, float]:
    out = {}
    for strat in strategies:
        split = make_split(trial.ranking, SplitSpec(strategy=strat, seed=seed))
        model = train_margin_ranker(split.train, trial.features, hyper)
        out[strat] = evaluate_ranker(model, split.test, trial.features)
    return out


def null_pass_rate(reports: Sequence[StatReport]) -> float:
    scored = [r for r in reports if r.family in ("continuous", "binary")]
    return sum(r.passes_bonferroni for r in scored) / len(scored)


def random_baseline(trial: Trial, seed: int) -> float:
    return baseline_random(trial.mixed, seed)


def planted_config(seed: int, **kw) -> SynthConfig:
    return replace(SynthConfig(seed=seed), **kw)


def null_config(seed: int, **kw) -> SynthConfig:
    return planted_config(seed, **kw).null()
