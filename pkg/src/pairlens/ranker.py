"""Pairwise engagement ranking: splits, heuristic baselines and a linear
max-margin scorer over title-feature differences."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

import numpy as np

from .pairing import (
    INVERSE,
    SIMILAR,
    PairingConfig,
    PostPair,
    apply_title_filters,
    build_exact_pairs,
    build_inverse_pairs,
    build_similar_pairs,
    mix_datasets,
)
from .stats.inference import DegenerateSampleError, pearson
from .textmetrics.features import BINARY, CONTINUOUS

log = logging.getLogger(__name__)

POST1, POST2 = "post1", "post2"
EARLIER_POST = "earlier_post"
TIE_RULES = (EARLIER_POST, POST1)
STRATEGIES = ("date", "post_id", "video_id")
DEFAULT_COLUMNS = CONTINUOUS + BINARY


class DegenerateSplitError(ValueError):
    pass


class RankerTrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    strategy: str = "date"
    cutoff: str = "2022-01-01"
    test_frac: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown split strategy {self.strategy!r}")
        if not 0.0 < self.test_frac < 1.0:
            raise ValueError("test_frac must lie in (0, 1)")

    @property
    def cutoff_ts(self) -> int:
        d = datetime.strptime(self.cutoff, "%Y-%m-%d").replace(tzinfo=timezone.utc)
        return int(d.timestamp())


@dataclass
class Split:
    train: list[PostPair]
    test: list[PostPair]
    sampled: frozenset = frozenset()


def _sample_ids(ids: Iterable[str], frac: float, seed: int) -> frozenset:
    ids = sorted(set(ids))
    k = max(1, int(round(frac * len(ids))))
    rng = np.random.default_rng(seed)
    return frozenset(ids[int(i)] for i in rng.choice(len(ids), size=min(k, len(ids)), replace=False))


def make_split(pairs: Sequence[PostPair], spec: SplitSpec) -> Split:
    """Date split drops pairs straddling the cutoff; id splits send a pair to test if either id was sampled."""
    train, test = [], []
    sampled: frozenset = frozenset()
    if spec.strategy == "date":
        cut = spec.cutoff_ts
        for p in pairs:
            a, b = p.post1.created_at >= cut, p.post2.created_at >= cut
            if a and b:
                test.append(p)
            elif not a and not b:
                train.append(p)
    else:
        key = (lambda r: r.post_id) if spec.strategy == "post_id" else (lambda r: r.video_id)
        sampled = _sample_ids((key(r) for p in pairs for r in (p.post1, p.post2)), spec.test_frac, spec.seed)
        for p in pairs:
            (test if key(p.post1) in sampled or key(p.post2) in sampled else train).append(p)
    if not train or not test:
        raise DegenerateSplitError(f"degenerate split: {len(train)} train / {len(test)} test pairs")
    return Split(train, test, sampled)


def true_winner(p: PostPair) -> str | None:
    if p.post1.score > p.post2.score:
        return POST1
    if p.post2.score > p.post1.score:
        return POST2
    return None


def break_tie(p: PostPair, tie_rule: str) -> str:
    if tie_rule == EARLIER_POST and p.post2.created_at < p.post1.created_at:
        return POST2
    return POST1


def accuracy(pairs: Sequence[PostPair], predictions: Sequence[str]) -> float:
    """Share of correct predictions over pairs with a strict score winner."""
    hits = n = 0
    for p, guess in zip(pairs, predictions):
        truth = true_winner(p)
        if truth is None:
            continue
        n += 1
        hits += guess == truth
    return hits / n if n else math.nan


def baseline_random(pairs: Sequence[PostPair], seed: int = 0) -> float:
    coins = np.random.default_rng(seed).random(len(pairs))
    return accuracy(pairs, [POST1 if c < 0.5 else POST2 for c in coins])


def predict_time(p: PostPair, tie_rule: str = EARLIER_POST) -> str:
    if p.post1.created_at < p.post2.created_at:
        return POST1
    if p.post2.created_at < p.post1.created_at:
        return POST2
    return break_tie(p, tie_rule)


def baseline_time(pairs: Sequence[PostPair], tie_rule: str = EARLIER_POST) -> float:
    return accuracy(pairs, [predict_time(p, tie_rule) for p in pairs])


def predict_views(p: PostPair, tie_rule: str = EARLIER_POST) -> str:
    if p.post1.video_views > p.post2.video_views:
        return POST1
    if p.post2.video_views > p.post1.video_views:
        return POST2
    return break_tie(p, tie_rule)


def baseline_video_views(pairs: Sequence[PostPair], tie_rule: str = EARLIER_POST) -> float:
    return accuracy(pairs, [predict_views(p, tie_rule) for p in pairs])


# -- margin ranker -----------------------------------------------------------

@dataclass(frozen=True)
class RankerHyper:
    margin: float = 1.0
    lr: float = 0.05
    epochs: int = 100
    l2: float = 1e-4
    batch_size: int = 32
    seed: int = 0


@dataclass
class RankerModel:
    weights: list[float]
    bias: float
    margin: float
    feature_means: list[float]
    feature_sds: list[float]
    feature_columns: list[str]
    tie_rule: str = EARLIER_POST
    seed: int = 0
    hyper: dict = field(default_factory=dict)
    loss_history: list[float] = field(default_factory=list)

    def score(self, x: np.ndarray) -> np.ndarray:
        z = (x - np.asarray(self.feature_means)) / np.asarray(self.feature_sds)
        return z @ np.asarray(self.weights) + self.bias

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RankerModel":
        return cls(**d)


def feature_matrix(post_ids: Sequence[str], features: Mapping[str, Mapping[str, float]], columns: Sequence[str]) -> np.ndarray:
    return np.array([[float(features[pid][c]) for c in columns] for pid in post_ids], dtype=float).reshape(len(post_ids), len(columns))


def _usable(pairs: Iterable[PostPair], features: Mapping[str, Mapping]) -> list[PostPair]:
    out = [p for p in pairs if p.post1.post_id in features and p.post2.post_id in features]
    return out


def hinge_loss(w: np.ndarray, d: np.ndarray, margin: float, l2: float) -> float:
    """Mean of max(0, m - w.d) over winner-minus-loser rows, plus the L2 term."""
    h = np.maximum(0.0, margin - d @ w)
    return float(h.mean() + 0.5 * l2 * (w @ w)) if len(d) else 0.5 * l2 * float(w @ w)


def _oriented_diffs(pairs: Sequence[PostPair], features, columns, means, sds) -> np.ndarray:
    rows = []
    for p in pairs:
        t = true_winner(p)
        if t is None:
            continue
        win, lose = (p.post1, p.post2) if t == POST1 else (p.post2, p.post1)
        rows.append((win.post_id, lose.post_id))
    if not rows:
        return np.zeros((0, len(columns)))
    xw = feature_matrix([a for a, _ in rows], features, columns)
    xl = feature_matrix([b for _, b in rows], features, columns)
    return (xw - xl) / sds


def train_margin_ranker(
    train_pairs: Sequence[PostPair],
    features: Mapping[str, Mapping[str, float]],
    hyper: RankerHyper | None = None,
    columns: Sequence[str] = DEFAULT_COLUMNS,
    tie_rule: str = EARLIER_POST,
) -> RankerModel:
    """Minibatch subgradient descent on the pairwise hinge loss with L2 penalty.

    Features are standardized with statistics of the distinct training posts;
    zero-variance columns are dropped. The step size decays as lr / sqrt(epoch)
    and, as usual for subgradient methods, the best iterate seen is returned.
    """
    hyper = hyper or RankerHyper()
    if tie_rule not in TIE_RULES:
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    pairs = _usable(train_pairs, features)
    if not pairs:
        raise RankerTrainingError("no training pairs with features")
    post_ids = sorted({r.post_id for p in pairs for r in (p.post1, p.post2)})
    x = feature_matrix(post_ids, features, columns)
    sds = x.std(axis=0)
    keep = [i for i, s in enumerate(sds) if s > 0]
    cols = [columns[i] for i in keep]
    means = x[:, keep].mean(axis=0)
    sds = sds[keep]
    d = _oriented_diffs(pairs, features, cols, means, sds)

    rng = np.random.default_rng(hyper.seed)
    w = np.zeros(len(cols))
    best_w, best = w.copy(), hinge_loss(w, d, hyper.margin, hyper.l2)
    history = [best]
    n = len(d)
    bs = max(1, min(hyper.batch_size or n, n)) if n else 1
    for epoch in range(1, hyper.epochs + 1):
        step = hyper.lr / math.sqrt(epoch)
        order = rng.permutation(n)
        for start in range(0, n, bs):
            batch = d[order[start : start + bs]]
            active = batch[(hyper.margin - batch @ w) > 0]
            grad = hyper.l2 * w
            if len(active):
                grad = grad - active.sum(axis=0) / len(batch)
            w = w - step * grad
        with np.errstate(over="ignore", invalid="ignore"):
            loss = hinge_loss(w, d, hyper.margin, hyper.l2)
        if not math.isfinite(loss) or not np.all(np.isfinite(w)):
            raise RankerTrainingError(f"non-finite loss at epoch {epoch} (lr={hyper.lr}, margin={hyper.margin})")
        if loss < best:
            best, best_w = loss, w.copy()
        history.append(best)
    return RankerModel(
        weights=[float(v) for v in best_w],
        bias=0.0,
        margin=hyper.margin,
        feature_means=[float(v) for v in means],
        feature_sds=[float(v) for v in sds],
        feature_columns=list(cols),
        tie_rule=tie_rule,
        seed=hyper.seed,
        hyper=asdict(hyper),
        loss_history=history,
    )


def predict(model: RankerModel, x1: Sequence[float], x2: Sequence[float], pair: PostPair | None = None) -> str:
    """Winner under the model; an exact score tie falls back to the model's tie rule."""
    s1, s2 = model.score(np.asarray([x1, x2], dtype=float))
    if s1 > s2:
        return POST1
    if s2 > s1:
        return POST2
    if pair is None:
        return POST1
    return break_tie(pair, model.tie_rule)


def predict_pairs(model: RankerModel, pairs: Sequence[PostPair], features: Mapping[str, Mapping[str, float]]) -> list[str]:
    if not pairs:
        return []
    cols = model.feature_columns
    s1 = model.score(feature_matrix([p.post1.post_id for p in pairs], features, cols))
    s2 = model.score(feature_matrix([p.post2.post_id for p in pairs], features, cols))
    return [POST1 if a > b else POST2 if b > a else break_tie(p, model.tie_rule) for p, a, b in zip(pairs, s1, s2)]


def evaluate_ranker(model: RankerModel, pairs: Sequence[PostPair], features) -> float:
    pairs = _usable(pairs, features)
    return accuracy(pairs, predict_pairs(model, pairs, features))


def write_model(path, model: RankerModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_model(path) -> RankerModel:
    with open(path, encoding="utf-8") as fh:
        return RankerModel.from_json(json.load(fh))


# -- external predictions ----------------------------------------------------

@dataclass(frozen=True)
class ExternalEval:
    accuracy: float
    coverage: float
    n_covered: int
    n_unknown: int


def read_predictions(path) -> dict[str, str]:
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            winner = row["winner"].strip()
            if winner not in (POST1, POST2):
                raise ValueError(f"bad winner {winner!r} for pair {row['pair_id']}")
            out[row["pair_id"].strip()] = winner
    return out


def evaluate_external(pairs: Sequence[PostPair], predictions_file) -> ExternalEval:
    preds = read_predictions(predictions_file)
    by_id = {p.pair_id: p for p in pairs}
    unknown = sorted(set(preds) - set(by_id))
    if unknown:
        log.warning("%d predicted pair ids are not in the dataset and were ignored", len(unknown))
    covered = [p for p in pairs if p.pair_id in preds]
    acc = accuracy(covered, [preds[p.pair_id] for p in covered])
    return ExternalEval(acc, len(covered) / len(pairs) if pairs else 0.0, len(covered), len(unknown))


# -- datasets, experiments ---------------------------------------------------

def build_phase_pairs(posts, cfg: PairingConfig) -> dict[str, list[PostPair]]:
    """Unfiltered pairs of every phase."""
    return {
        "exact": build_exact_pairs(posts, cfg),
        "similar": build_similar_pairs(posts, cfg),
        "inverse": build_inverse_pairs(posts, cfg),
    }


def ranking_dataset(phase_pairs: Mapping[str, Sequence[PostPair]], cfg: PairingConfig, phases: Sequence[str] = (SIMILAR, INVERSE)) -> list[PostPair]:
    """Filtered, deduplicated, score-ordered pairs of the selected phases."""
    return mix_datasets(*(apply_title_filters(phase_pairs[ph], cfg) for ph in phases))


def split_seeds(spec: SplitSpec, n_seeds: int) -> list[SplitSpec]:
    if spec.strategy == "date":
        return [spec]
    return [replace(spec, seed=spec.seed + k) for k in range(n_seeds)]


@dataclass(frozen=True)
class ResultRow:
    split: str
    phase: str
    method: str
    accuracy: float
    n_test: int


def run_ranking_experiment(
    pairs: Sequence[PostPair],
    features,
    spec: SplitSpec,
    hyper: RankerHyper | None = None,
    n_seeds: int = 5,
    columns: Sequence[str] = DEFAULT_COLUMNS,
    tie_rule: str = EARLIER_POST,
) -> tuple[list[ResultRow], RankerModel]:
    """Accuracy of every method per phase (and overall), averaged over split seeds."""
    hyper = hyper or RankerHyper()
    pairs = _usable(pairs, features)
    acc: dict[tuple[str, str], list[float]] = {}
    sizes: dict[tuple[str, str], list[int]] = {}
    model = None
    for k, s in enumerate(split_seeds(spec, n_seeds)):
        split = make_split(pairs, s)
        m = train_margin_ranker(split.train, features, replace(hyper, seed=hyper.seed + k), columns, tie_rule)
        model = model or m
        groups = {"mixed": split.test}
        for p in split.test:
            groups.setdefault(p.phase, []).append(p)
        for phase, test in sorted(groups.items()):
            for method, value in (
                ("random", baseline_random(test, s.seed)),
                ("time", baseline_time(test, tie_rule)),
                ("video_views", baseline_video_views(test, tie_rule)),
                ("margin_ranker", evaluate_ranker(m, test, features)),
            ):
                acc.setdefault((phase, method), []).append(value)
                sizes.setdefault((phase, method), []).append(len(test))
    rows = [
        ResultRow(spec.strategy, phase, method, float(np.nanmean(v)), int(round(np.mean(sizes[(phase, method)]))))
        for (phase, method), v in sorted(acc.items())
    ]
    return rows, model


def write_results_csv(path, rows: Iterable[ResultRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["split", "phase", "method", "accuracy", "n_test"])
        for r in rows:
            w.writerow([r.split, r.phase, r.method, repr(r.accuracy), r.n_test])


def read_results_csv(path) -> list[ResultRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [ResultRow(r["split"], r["phase"], r["method"], float(r["accuracy"]), int(r["n_test"])) for r in csv.DictReader(fh)]


@dataclass(frozen=True)
class AblationRow:
    threshold: float
    accuracy: float
    n_train: int
    n_test: int


@dataclass(frozen=True)
class Ablation:
    rows: list[AblationRow]
    correlation: float | None


def _fit_eval(pairs, features, spec, hyper, columns) -> tuple[float, int, int]:
    pairs = _usable(pairs, features)
    split = make_split(pairs, spec)
    model = train_margin_ranker(split.train, features, hyper, columns)
    return evaluate_ranker(model, split.test, features), len(split.train), len(split.test)


def ablate_thresholds(
    phase_pairs: Mapping[str, Sequence[PostPair]],
    features,
    base_cfg: PairingConfig,
    ld_pair_grid: Sequence[int] = (50, 60, 70, 80, 90, 95),
    spec: SplitSpec | None = None,
    hyper: RankerHyper | None = None,
    phases: Sequence[str] = (SIMILAR, INVERSE),
    columns: Sequence[str] = DEFAULT_COLUMNS,
) -> Ablation:
    """Refilter and retrain at each title-similarity threshold; Pearson of threshold vs accuracy."""
    spec = spec or SplitSpec()
    rows = []
    for th in ld_pair_grid:
        cfg = replace(base_cfg, ld_pair_max=int(th))
        a, ntr, nte = _fit_eval(ranking_dataset(phase_pairs, cfg, phases), features, spec, hyper, columns)
        rows.append(AblationRow(float(th), a, ntr, nte))
    corr = None
    if len(rows) >= 3:
        try:
            corr = pearson([r.threshold for r in rows], [r.accuracy for r in rows])
        except DegenerateSampleError:
            corr = None
    return Ablation(rows, corr)


def video_filter_ablation(
    phase_pairs: Mapping[str, Sequence[PostPair]],
    features,
    base_cfg: PairingConfig,
    spec: SplitSpec | None = None,
    hyper: RankerHyper | None = None,
    phases: Sequence[str] = (SIMILAR, INVERSE),
    columns: Sequence[str] = DEFAULT_COLUMNS,
) -> dict[str, float]:
    """Test accuracy with and without the title-vs-video replication filter."""
    spec = spec or SplitSpec()
    with_f = _fit_eval(ranking_dataset(phase_pairs, base_cfg, phases), features, spec, hyper, columns)[0]
    without = _fit_eval(ranking_dataset(phase_pairs, replace(base_cfg, ld_video_max=100), phases), features, spec, hyper, columns)[0]
    return {"with_filter": with_f, "without_filter": without}
