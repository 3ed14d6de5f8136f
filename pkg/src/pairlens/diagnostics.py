"""Timing, video-popularity and title-replication diagnostics over pair sets."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .ingest import PostRecord
from .pairing import PostPair, video_ld
from .stats.inference import DegenerateSampleError, correlation_p, spearman, welch_t_test

DEFAULT_WINDOWS_H = (0.5, 1, 2, 4, 8, 12, 24)
DEFAULT_VVR_EDGES = tuple(2.0**k for k in range(-4, 5))


@dataclass(frozen=True)
class WindowRow:
    window: float
    n_pairs: int
    n_earlier_wins: int
    n_later_wins: int
    later_win_ratio: float | None


def time_window_analysis(pairs: Iterable[PostPair], windows: Sequence[float] = tuple(h * 3600 for h in DEFAULT_WINDOWS_H)) -> list[WindowRow]:
    """Share of later-posted winners among pairs with delta_t within each cumulative window.

    Pairs are re-oriented by time first; equal scores and equal timestamps are excluded.
    """
    rows = []
    pairs = list(pairs)
    for w in sorted(windows):
        early = late = n = 0
        for p in pairs:
            if p.delta_t > w:
                continue
            n += 1
            a, b = p.post1, p.post2
            if a.created_at == b.created_at or a.score == b.score:
                continue
            if a.created_at > b.created_at:
                a, b = b, a
            if b.score > a.score:
                late += 1
            else:
                early += 1
        ratio = late / (late + early) if late + early else None
        rows.append(WindowRow(w, n, early, late, ratio))
    return rows


@dataclass(frozen=True)
class VVRInterval:
    lo: float
    hi: float
    n: int
    mean_score_diff: float | None
    n_post1_wins: int
    n_post2_wins: int
    win_ratio: float | None


@dataclass(frozen=True)
class VVRAnalysis:
    intervals: list[VVRInterval]
    spearman: float | None
    spearman_p: float | None
    n: int


def vvr_interval_analysis(pairs: Iterable[PostPair], edges: Sequence[float] = DEFAULT_VVR_EDGES) -> VVRAnalysis:
    """Bucket pairs by vvr into [edges[i], edges[i+1]) (last bucket closed) and compare scores."""
    pairs = list(pairs)
    edges = sorted(edges)
    buckets: list[list[PostPair]] = [[] for _ in range(len(edges) - 1)]
    for p in pairs:
        for i in range(len(buckets)):
            last = i == len(buckets) - 1
            if edges[i] <= p.vvr < edges[i + 1] or (last and p.vvr == edges[i + 1]):
                buckets[i].append(p)
                break
    intervals = []
    for i, b in enumerate(buckets):
        d = [p.post1.score - p.post2.score for p in b]
        w1 = sum(1 for x in d if x > 0)
        w2 = sum(1 for x in d if x < 0)
        intervals.append(
            VVRInterval(
                lo=edges[i],
                hi=edges[i + 1],
                n=len(b),
                mean_score_diff=float(np.mean(d)) if d else None,
                n_post1_wins=w1,
                n_post2_wins=w2,
                win_ratio=w1 / (w1 + w2) if w1 + w2 else None,
            )
        )
    rho = p_rho = None
    if len(pairs) >= 3:
        try:
            rho = spearman([p.vvr for p in pairs], [p.post1.score - p.post2.score for p in pairs])
            p_rho = correlation_p(rho, len(pairs))
        except DegenerateSampleError:
            pass
    return VVRAnalysis(intervals, rho, p_rho, len(pairs))


@dataclass(frozen=True)
class LDBin:
    lo: float
    hi: float
    n: int
    mean_score: float | None
    p_vs_reference: float | None
    log10_p: float | None
    direction: str | None


def _bin_row(lo, hi, scores: Sequence[float], ref: Sequence[float], is_ref: bool) -> LDBin:
    mean = float(np.mean(scores)) if len(scores) else None
    if is_ref or len(scores) < 2 or len(ref) < 2:
        return LDBin(lo, hi, len(scores), mean, None, None, None)
    try:
        res = welch_t_test(scores, ref)
        p, direction = float(res.p_two_sided), res.direction
    except DegenerateSampleError:
        p, direction = 0.0, None
    logp = math.log10(p) if p > 0 else -math.inf
    return LDBin(lo, hi, len(scores), mean, p, logp, direction)


def ld_bin_analysis(posts: Iterable[PostRecord], mode: str = "fixed", n_bins: int | None = None) -> list[LDBin]:
    """Mean score per bin of title-vs-video similarity, each bin tested against the last one.

    ``fixed``: 20 bins of width 5, the last one [95, 100] closed.
    ``quantile``: equal-count bins (5 by default) over posts sorted by similarity.
    """
    items = sorted(((video_ld(p), p.score, p.post_id) for p in posts if p.video_title is not None))
    if mode == "fixed":
        k = n_bins or 20
        width = 100 / k
        groups: list[list[float]] = [[] for _ in range(k)]
        for ld, s, _ in items:
            groups[min(int(ld // width), k - 1)].append(s)
        bounds = [(i * width, (i + 1) * width) for i in range(k)]
    elif mode == "quantile":
        k = n_bins or 5
        chunks = np.array_split(np.arange(len(items)), k)
        groups = [[items[j][1] for j in c] for c in chunks]
        bounds = [(items[c[0]][0], items[c[-1]][0]) if len(c) else (math.nan, math.nan) for c in chunks]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ref = groups[-1]
    return [_bin_row(lo, hi, g, ref, i == k - 1) for i, ((lo, hi), g) in enumerate(zip(bounds, groups))]


def write_rows_csv(path, rows: Iterable) -> None:
    rows = [asdict(r) for r in rows]
    if not rows:
        open(path, "w").close()
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: "" if v is None else (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for k, v in r.items()})
