"""Exact / Similar / Inverse post pairing, title filters and the Mixed dataset.

Pairs never cross subreddit boundaries. Within each group the builders use a
greedy earliest-first matching: posts are visited in time order and each
unmatched post is paired with the earliest later unmatched post that
satisfies the phase constraints, so a post appears in at most one pair per
phase. ``exhaustive=True`` emits every eligible pair instead.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .ingest import PostRecord
from .textmetrics.levenshtein import normalized_ld

EXACT, SIMILAR, INVERSE = "exact", "similar", "inverse"
RANDOM, BY_SCORE = "random", "by_score"
PHASE_PRECEDENCE = {EXACT: 0, INVERSE: 1, SIMILAR: 2}


@dataclass(frozen=True)
class PairingConfig:
    time_window: float = 1800.0
    vvr_max: float = 2.0
    ld_pair_max: int = 70
    ld_video_max: int = 95
    min_title_chars: int = 5
    require_multiword: bool = True
    score_ratio_min: float = 2.0
    score_diff_min: int = 20
    rng_seed: int = 0
    exhaustive: bool = False

    def __post_init__(self):
        if self.time_window <= 0:
            raise ValueError("time_window must be positive")
        if self.vvr_max < 1:
            raise ValueError("vvr_max must be >= 1")
        for name in ("ld_pair_max", "ld_video_max"):
            if not 0 <= getattr(self, name) <= 100:
                raise ValueError(f"{name} must lie in [0, 100]")


@dataclass(frozen=True)
class PostPair:
    post1: PostRecord
    post2: PostRecord
    phase: str
    delta_t: int
    vvr: float
    ld_pair: int
    ld1_video: int
    ld2_video: int
    ordering: str

    @property
    def key(self) -> tuple[str, str]:
        a, b = self.post1.post_id, self.post2.post_id
        return (a, b) if a <= b else (b, a)

    @property
    def pair_id(self) -> str:
        a, b = self.key
        return f"{a}__{b}"

    def to_json(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "phase": self.phase,
            "post1_id": self.post1.post_id,
            "post2_id": self.post2.post_id,
            "delta_t": self.delta_t,
            "vvr": self.vvr,
            "ld_pair": self.ld_pair,
            "ld1_video": self.ld1_video,
            "ld2_video": self.ld2_video,
            "ordering": self.ordering,
        }


@lru_cache(maxsize=500_000)
def _ld(a: str, b: str) -> int:
    return normalized_ld(a, b)


def video_ld(p: PostRecord) -> int:
    return _ld(p.title, p.video_title or "")


def _vvr(p: PostRecord, q: PostRecord) -> float:
    return p.video_views / q.video_views


def _flip(seed: int, a: str, b: str) -> bool:
    lo, hi = (a, b) if a <= b else (b, a)
    h = hashlib.blake2b(f"{seed}|{lo}|{hi}".encode(), digest_size=8).digest()
    return h[0] & 1 == 1


def make_pair(p: PostRecord, q: PostRecord, phase: str, ordering: str, seed: int = 0) -> PostPair:
    """Build a pair with derived fields. ``random`` ordering flips by a seeded hash of the ids."""
    if ordering == RANDOM:
        a, b = (p, q) if p.post_id <= q.post_id else (q, p)
        if _flip(seed, a.post_id, b.post_id):
            a, b = b, a
    elif ordering == BY_SCORE:
        a, b = (p, q) if p.score >= q.score else (q, p)
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    if phase == EXACT:
        vvr = 1.0
    else:
        vvr = _vvr(a, b)
    return PostPair(
        post1=a,
        post2=b,
        phase=phase,
        delta_t=abs(a.created_at - b.created_at),
        vvr=vvr,
        ld_pair=_ld(a.title, b.title),
        ld1_video=video_ld(a),
        ld2_video=video_ld(b),
        ordering=ordering,
    )


def _joined(posts: Iterable[PostRecord]) -> list[PostRecord]:
    return [p for p in posts if p.video_id is not None and p.video_views is not None]


def _match(
    group: Sequence[PostRecord],
    window: float,
    eligible: Callable[[PostRecord, PostRecord], bool],
    exhaustive: bool,
) -> list[tuple[PostRecord, PostRecord]]:
    posts = sorted(group, key=lambda p: (p.created_at, p.post_id))
    out = []
    used: set[str] = set()
    for i, p in enumerate(posts):
        if not exhaustive and p.post_id in used:
            continue
        for q in posts[i + 1 :]:
            if q.created_at - p.created_at > window:
                break
            if not exhaustive and q.post_id in used:
                continue
            if eligible(p, q):
                out.append((p, q))
                if not exhaustive:
                    used.add(p.post_id)
                    used.add(q.post_id)
                    break
    return out


def _sort_pairs(pairs: list[PostPair]) -> list[PostPair]:
    return sorted(pairs, key=lambda x: (x.post1.subreddit, min(x.post1.created_at, x.post2.created_at), x.pair_id))


def _grouped(posts: Iterable[PostRecord], key: Callable[[PostRecord], tuple]) -> list[list[PostRecord]]:
    groups: dict[tuple, list[PostRecord]] = defaultdict(list)
    for p in posts:
        groups[key(p)].append(p)
    return [groups[k] for k in sorted(groups, key=lambda k: tuple("" if v is None else str(v) for v in k))]


def build_exact_pairs(posts: Iterable[PostRecord], cfg: PairingConfig) -> list[PostPair]:
    """Same subreddit, same video, posted within the time window."""
    pairs = []
    for group in _grouped(_joined(posts), lambda p: (p.subreddit, p.video_id)):
        for p, q in _match(group, cfg.time_window, lambda p, q: True, cfg.exhaustive):
            pairs.append(make_pair(p, q, EXACT, RANDOM, cfg.rng_seed))
    return _sort_pairs(pairs)


def similar_eligible(p: PostRecord, q: PostRecord, vvr_max: float, same_video: bool = False) -> bool:
    if same_video:
        return p.video_id == q.video_id
    if p.video_id == q.video_id:
        return False
    if p.video_views <= 0 or q.video_views <= 0:
        return False
    hi, lo = max(p.video_views, q.video_views), min(p.video_views, q.video_views)
    return hi <= vvr_max * lo


def build_similar_pairs(posts: Iterable[PostRecord], cfg: PairingConfig, same_video: bool = False) -> list[PostPair]:
    """Same subreddit and video category, different videos with views within ``vvr_max`` of each other.

    ``same_video=True`` flips the video constraint and reproduces the Exact phase.
    """
    phase = EXACT if same_video else SIMILAR
    pairs = []
    for group in _grouped(_joined(posts), lambda p: (p.subreddit, p.video_category)):
        elig = lambda p, q: similar_eligible(p, q, cfg.vvr_max, same_video)  # noqa: E731
        for p, q in _match(group, cfg.time_window, elig, cfg.exhaustive):
            pairs.append(make_pair(p, q, phase, RANDOM, cfg.rng_seed))
    return _sort_pairs(pairs)


def inverse_eligible(p: PostRecord, q: PostRecord) -> bool:
    if p.video_id == q.video_id or p.score == q.score:
        return False
    if p.video_views <= 0 or q.video_views <= 0:
        return False
    hi, lo = (p, q) if p.score > q.score else (q, p)
    return hi.video_views <= lo.video_views


def build_inverse_pairs(posts: Iterable[PostRecord], cfg: PairingConfig) -> list[PostPair]:
    """Same subreddit, the higher-scoring post links the video with fewer (or equal) views."""
    pairs = []
    for group in _grouped(_joined(posts), lambda p: (p.subreddit,)):
        for p, q in _match(group, cfg.time_window, inverse_eligible, cfg.exhaustive):
            pairs.append(make_pair(p, q, INVERSE, BY_SCORE, cfg.rng_seed))
    return _sort_pairs(pairs)


def _nonspace_len(s: str) -> int:
    return sum(1 for ch in s if not ch.isspace())


def title_ok(title: str, cfg: PairingConfig) -> bool:
    if _nonspace_len(title) < cfg.min_title_chars:
        return False
    return not cfg.require_multiword or len(title.split()) >= 2


def score_contrast_ok(p: PostPair, cfg: PairingConfig) -> bool:
    hi, lo = max(p.post1.score, p.post2.score), min(p.post1.score, p.post2.score)
    return hi >= cfg.score_ratio_min * lo and hi - lo >= cfg.score_diff_min


def apply_title_filters(pairs: Iterable[PostPair], cfg: PairingConfig, score_contrast: bool = True) -> list[PostPair]:
    out = []
    for p in pairs:
        if p.ld_pair > cfg.ld_pair_max:
            continue
        if p.ld1_video > cfg.ld_video_max or p.ld2_video > cfg.ld_video_max:
            continue
        if not (title_ok(p.post1.title, cfg) and title_ok(p.post2.title, cfg)):
            continue
        if score_contrast and not score_contrast_ok(p, cfg):
            continue
        out.append(p)
    return out


def order_by_score(p: PostPair) -> PostPair | None:
    """Re-orient so post1 has the higher score; ties cannot be ordered and give None."""
    if p.post1.score == p.post2.score:
        return None
    if p.post1.score > p.post2.score:
        return p if p.ordering == BY_SCORE else replace(p, ordering=BY_SCORE)
    return replace(
        p,
        post1=p.post2,
        post2=p.post1,
        vvr=1.0 if p.phase == EXACT else _vvr(p.post2, p.post1),
        ld1_video=p.ld2_video,
        ld2_video=p.ld1_video,
        ordering=BY_SCORE,
    )


def mix_datasets(*phases: Iterable[PostPair]) -> list[PostPair]:
    """Deduplicated union (exact > inverse > similar on collisions), ordered by score."""
    best: dict[tuple[str, str], PostPair] = {}
    for pairs in phases:
        for p in pairs:
            cur = best.get(p.key)
            if cur is None or PHASE_PRECEDENCE[p.phase] < PHASE_PRECEDENCE[cur.phase]:
                best[p.key] = p
    out = [q for q in (order_by_score(p) for p in best.values()) if q is not None]
    return _sort_pairs(out)


def validate_pair(p: PostPair, cfg: PairingConfig) -> list[str]:
    """Re-derive phase membership from the raw records; returns the violated constraints."""
    a, b = p.post1, p.post2
    errs = []
    if a.subreddit != b.subreddit:
        errs.append("subreddit")
    if a.post_id == b.post_id:
        errs.append("same post")
    if p.delta_t != abs(a.created_at - b.created_at) or p.delta_t > cfg.time_window:
        errs.append("delta_t")
    if p.ld_pair != normalized_ld(a.title, b.title):
        errs.append("ld_pair")
    if p.ld1_video != normalized_ld(a.title, a.video_title or "") or p.ld2_video != normalized_ld(b.title, b.video_title or ""):
        errs.append("ld_video")
    if p.ordering == BY_SCORE and not a.score > b.score:
        errs.append("by_score order")
    if p.phase == EXACT:
        if a.video_id != b.video_id or p.vvr != 1.0:
            errs.append("exact video")
    else:
        if a.video_views <= 0 or b.video_views <= 0:
            errs.append("zero views")
        elif abs(p.vvr - a.video_views / b.video_views) > 1e-12 * max(1.0, p.vvr):
            errs.append("vvr")
        if a.video_id == b.video_id:
            errs.append("same video")
    if p.phase == SIMILAR:
        if a.video_category != b.video_category:
            errs.append("category")
        if max(p.vvr, 1 / p.vvr) > cfg.vvr_max * (1 + 1e-12):
            errs.append("vvr_max")
    if p.phase == INVERSE:
        if not a.score > b.score or p.vvr > 1.0:
            errs.append("inverse order")
    return errs


def write_pairs(path, pairs: Iterable[PostPair]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in pairs:
            fh.write(json.dumps(p.to_json(), sort_keys=True) + "\n")


def read_pairs(path, posts: Mapping[str, PostRecord]) -> list[PostPair]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            out.append(
                PostPair(
                    post1=posts[d["post1_id"]],
                    post2=posts[d["post2_id"]],
                    phase=d["phase"],
                    delta_t=d["delta_t"],
                    vvr=d["vvr"],
                    ld_pair=d["ld_pair"],
                    ld1_video=d["ld1_video"],
                    ld2_video=d["ld2_video"],
                    ordering=d["ordering"],
                )
            )
    return out
