"""The paired metric battery: for every title metric compare the more popular
post of each pair (group 1) against the less popular one (group 2)."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

from ..textmetrics.features import BINARY, CONTINUOUS
from .inference import (
    GROUP1_LARGER,
    GROUP1_SMALLER,
    NO_DIRECTION,
    DegenerateSampleError,
    bonferroni,
    dagostino_k2,
    mcnemar,
    paired_t_test,
    wilcoxon_signed_rank,
)

INCONCLUSIVE = "inconclusive"


@dataclass
class StatReport:
    metric_name: str
    test: str
    statistic: float | None
    p_value: float
    direction: str
    effect_size: float | None
    n: int
    passes_bonferroni: bool
    alpha_corrected: float
    family: str = "continuous"
    conclusion: str | None = None
    mean1: float | None = None
    mean2: float | None = None
    skipped: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BatteryConfig:
    alpha: float = 0.001
    m_continuous: int = 22
    m_binary: int = 16
    continuous: tuple[str, ...] = CONTINUOUS
    binary: tuple[str, ...] = BINARY
    min_effect: float = 0.1
    normality: bool = False
    extra_continuous: tuple[str, ...] = field(default_factory=tuple)


def _skipped(metric: str, test: str, family: str, alpha_c: float, n: int, why: str) -> StatReport:
    return StatReport(
        metric_name=metric,
        test=test,
        statistic=None,
        p_value=1.0,
        direction=NO_DIRECTION,
        effect_size=None,
        n=n,
        passes_bonferroni=False,
        alpha_corrected=alpha_c,
        family=family,
        conclusion=INCONCLUSIVE,
        skipped=why,
    )


def continuous_reports(metric: str, diffs: Sequence[float], alpha_c: float, min_effect: float = 0.1) -> list[StatReport]:
    n = len(diffs)
    try:
        t = paired_t_test(diffs)
        t_rep = StatReport(metric, "paired_t", t.t, t.p_two_sided, t.direction, None, n, t.p_two_sided < alpha_c, alpha_c)
    except DegenerateSampleError as exc:
        t_rep = _skipped(metric, "paired_t", "continuous", alpha_c, n, str(exc))
    try:
        w = wilcoxon_signed_rank(diffs)
        w_rep = StatReport(metric, "wilcoxon", w.w, w.p_two_sided, w.direction, w.r_rb, w.n, w.p_two_sided < alpha_c, alpha_c)
    except DegenerateSampleError as exc:
        w_rep = _skipped(metric, "wilcoxon", "continuous", alpha_c, n, str(exc))

    conclusion = conclude(t_rep, w_rep, min_effect)
    t_rep.conclusion = w_rep.conclusion = conclusion
    return [t_rep, w_rep]


def conclude(t_rep: StatReport, w_rep: StatReport, min_effect: float = 0.1) -> str:
    """Group-1 direction when both tests pass and agree with a non-trivial effect, else inconclusive."""
    if t_rep.skipped or w_rep.skipped:
        return INCONCLUSIVE
    if t_rep.direction != w_rep.direction or t_rep.direction == NO_DIRECTION:
        return INCONCLUSIVE
    if w_rep.effect_size is None or w_rep.effect_size < min_effect:
        return INCONCLUSIVE
    if not (t_rep.passes_bonferroni and w_rep.passes_bonferroni):
        return INCONCLUSIVE
    return t_rep.direction


def binary_report(metric: str, x1: Sequence[int], x2: Sequence[int], alpha_c: float) -> StatReport:
    n = len(x1)
    b = sum(1 for a, c in zip(x1, x2) if a and not c)
    c = sum(1 for a, cc in zip(x1, x2) if cc and not a)
    mean1 = sum(x1) / n if n else math.nan
    mean2 = sum(x2) / n if n else math.nan
    try:
        res = mcnemar(b, c)
    except DegenerateSampleError as exc:
        rep = _skipped(metric, "mcnemar", "binary", alpha_c, n, str(exc))
        rep.mean1, rep.mean2 = mean1, mean2
        rep.effect_size = mean1 - mean2 if n else None
        return rep
    direction = GROUP1_LARGER if b > c else GROUP1_SMALLER if c > b else NO_DIRECTION
    passes = res.p_two_sided < alpha_c
    return StatReport(
        metric_name=metric,
        test="mcnemar",
        statistic=res.statistic,
        p_value=res.p_two_sided,
        direction=direction,
        effect_size=mean1 - mean2,
        n=n,
        passes_bonferroni=passes,
        alpha_corrected=alpha_c,
        family="binary",
        conclusion=direction if passes else INCONCLUSIVE,
        mean1=mean1,
        mean2=mean2,
    )


def _paired_values(pairs, features: Mapping[str, Mapping[str, float]], metric: str):
    a, b = [], []
    for p in pairs:
        f1 = features.get(p.post1.post_id)
        f2 = features.get(p.post2.post_id)
        if f1 is None or f2 is None or metric not in f1 or metric not in f2:
            continue
        a.append(f1[metric])
        b.append(f2[metric])
    return a, b


def run_metric_battery(pairs: Iterable, features_by_post: Mapping[str, Mapping[str, float]], cfg: BatteryConfig | None = None) -> list[StatReport]:
    """Run t/Wilcoxon on every continuous metric and McNemar on every binary one.

    ``pairs`` must be ordered by score (post1 is the more popular post).
    Reports come back sorted by metric name, then test.
    """
    cfg = cfg or BatteryConfig()
    pairs = list(pairs)
    alpha_cont = bonferroni(cfg.alpha, cfg.m_continuous)
    alpha_bin = bonferroni(cfg.alpha, cfg.m_binary)
    reports: list[StatReport] = []
    for metric in (*cfg.continuous, *cfg.extra_continuous):
        a, b = _paired_values(pairs, features_by_post, metric)
        diffs = [x - y for x, y in zip(a, b)]
        reports.extend(continuous_reports(metric, diffs, alpha_cont, cfg.min_effect))
        if cfg.normality:
            try:
                k = dagostino_k2(diffs)
                reports.append(StatReport(metric, "dagostino_k2", k.k2, k.p, NO_DIRECTION, None, len(diffs), k.p < cfg.alpha, cfg.alpha, family="normality"))
            except DegenerateSampleError as exc:
                reports.append(_skipped(metric, "dagostino_k2", "normality", cfg.alpha, len(diffs), str(exc)))
    for metric in cfg.binary:
        a, b = _paired_values(pairs, features_by_post, metric)
        reports.append(binary_report(metric, a, b, alpha_bin))
    reports.sort(key=lambda r: (r.metric_name, r.test))
    return reports


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def write_reports(path, reports: Iterable[StatReport]) -> None:
    rows = [{k: _clean(v) for k, v in r.to_dict().items()} for r in reports]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_reports(path) -> list[StatReport]:
    with open(path, encoding="utf-8") as fh:
        return [StatReport(**row) for row in json.load(fh)]
