"""Synthetic posts / videos / subreddits with planted, known engagement effects.

Posts arrive in short bursts ("events"): 2 to 4 posts in one subreddit linking
videos from one popularity cluster of one category, sometimes the same video.
The log-score of a post is

    beta0 + subreddit offset + beta_views * (clipped log10 views - 5)
          + exposure penalty + title effect + rewrite bonus + noise

where the title effect is a weighted sum of standardized title knobs (word
count, positive-sentiment words, ...). Posts whose title copies the video title
get neither the title effect nor the rewrite bonus, so their outcomes carry no
title signal. Near-duplicate posts rewrite an earlier title from the same event
with neutral substitutions and keep its knobs, hence its title effect.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .ingest import PostRecord, canonical_watch_url, join_posts_videos, post_from_json, video_from_json
from .stats.powerlaw import sample_powerlaw
from .textmetrics.levenshtein import normalized_ld
from .textmetrics.lexicons import WordLists, default_lexicons
from .textmetrics.vader import BOOSTERS, NEGATE

T_START = 1577836800  # 2020-01-01
T_END = 1656633600  # 2022-07-01
CATEGORIES = (
    "Music",
    "Gaming",
    "Entertainment",
    "People & Blogs",
    "Sports",
    "News & Politics",
    "Education",
    "Science & Technology",
)
_ID_CHARS = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"

_NEUTRAL = """video clip footage session episode part chapter volume series season round stage
level track album single cover remix version edit mix set show stream broadcast recap
highlights montage compilation walkthrough playthrough tutorial guide lesson lecture review
unboxing test trial build setup install upgrade tour trip journey route drive ride flight
river mountain valley island city village street bridge tower harbor garden kitchen garage
studio stadium arena court field track engine motor wheel piano guitar drum violin bass
synth keyboard camera drone lens laptop phone tablet console controller monday tuesday
wednesday thursday friday saturday sunday morning evening weekend summer winter autumn
spring january march april october november december north south east west river ocean
desert forest canyon lake coast island harbor airport station subway market museum library
chapter finale pilot premiere teaser trailer preview sample demo prototype model version"""

_POSITIVE = """amazing awesome beautiful best brilliant excellent fantastic fun glad great
happy incredible love lovely perfect wonderful superb cool nice win winning free enjoy
impressive outstanding gorgeous elegant exciting hilarious delightful"""

KNOB_PROBS = {
    "sentiment": (0.5, 0.3, 0.15, 0.05),
    "numbers": 0.3,
    "uppercase": 0.2,
    "exclamation": 0.15,
    "question": 0.1,
}
WORDS_RANGE = (2, 12)


def _knob_moments() -> dict[str, tuple[float, float]]:
    lo, hi = WORDS_RANGE
    k = hi - lo + 1
    out = {"words": ((lo + hi) / 2, math.sqrt((k * k - 1) / 12))}
    ps = KNOB_PROBS["sentiment"]
    m1 = sum(i * p for i, p in enumerate(ps))
    m2 = sum(i * i * p for i, p in enumerate(ps))
    out["sentiment"] = (m1, math.sqrt(m2 - m1 * m1))
    for name in ("numbers", "uppercase", "exclamation", "question"):
        p = KNOB_PROBS[name]
        out[name] = (p, math.sqrt(p * (1 - p)))
    return out


KNOB_MOMENTS = _knob_moments()
_SENT_CDF = np.cumsum(KNOB_PROBS["sentiment"])[:-1]


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_subreddits: int = 20
    posts_per_subreddit: int = 1500
    n_videos: int = 20000
    views_alpha: float = 1.11
    views_x_min: float = 1000.0
    subreddit_size_alpha: float = 1.84
    subreddit_size_x_min: float = 1000.0
    exposure_halflife: float = 7200.0
    exposure_weight: float = 0.8
    title_effect_weights: dict = field(default_factory=lambda: {"words": 0.8, "sentiment": 0.6})
    copy_title_fraction: float = 0.21
    near_dup_fraction: float = 0.25
    rewrite_bonus: float = 0.5
    beta0: float = math.log(100.0)
    beta_views: float = 0.3
    subreddit_sd: float = 0.5
    noise_sd: float = 1.0
    same_video_prob: float = 0.3
    cluster_size: int = 6
    late_gap_prob: float = 0.15
    non_video_fraction: float = 0.01

    def __post_init__(self):
        for name in ("copy_title_fraction", "near_dup_fraction", "same_video_prob", "late_gap_prob", "non_video_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.views_alpha <= 1 or self.subreddit_size_alpha <= 1:
            raise ValueError("power-law exponents must be > 1")
        unknown = set(self.title_effect_weights) - set(KNOB_MOMENTS)
        if unknown:
            raise ValueError(f"unknown title knobs: {sorted(unknown)}")
        if self.n_subreddits < 1 or self.posts_per_subreddit < 1 or self.n_videos < self.cluster_size:
            raise ValueError("world too small")

    def null(self) -> "SynthConfig":
        """Same world without any title-driven effect."""
        return replace(self, title_effect_weights={}, rewrite_bonus=0.0)

    def to_dict(self) -> dict:
        return asdict(self)


def sub_seed(root: int, label: str) -> int:
    return int.from_bytes(hashlib.sha256(f"{root}:{label}".encode()).digest()[:8], "little")


def _rng(cfg: SynthConfig, label: str) -> np.random.Generator:
    return np.random.default_rng(sub_seed(cfg.seed, label))


class TitleGrammar:
    """Random titles from neutral / positive / number tokens with explicit knobs."""

    def __init__(self, lexicons: WordLists | None = None):
        lex = lexicons or default_lexicons()
        blocked = set(lex.valence) | set(BOOSTERS) | set(NEGATE)
        for s in (*lex.classes.values(), *lex.sentiment.values()):
            blocked |= s
        self.neutral = sorted({w for w in _NEUTRAL.split() if w not in blocked})
        self.positive = sorted({w for w in _POSITIVE.split() if lex.valence.get(w, 0.0) > 0})
        if len(self.neutral) < 50 or len(self.positive) < 10:
            raise ValueError("word pools too small for the configured lexicons")

    def knobs(self, rng: np.random.Generator) -> dict[str, int]:
        lo, hi = WORDS_RANGE
        n = int(rng.integers(lo, hi + 1))
        k = {
            "words": n,
            "sentiment": int(np.searchsorted(_SENT_CDF, rng.random(), side="right")),
            "numbers": int(rng.random() < KNOB_PROBS["numbers"]),
            "uppercase": int(rng.random() < KNOB_PROBS["uppercase"]),
        }
        k["sentiment"] = min(k["sentiment"], n - k["numbers"])
        punct = rng.random()
        k["exclamation"] = int(punct < KNOB_PROBS["exclamation"])
        k["question"] = int(KNOB_PROBS["exclamation"] <= punct < KNOB_PROBS["exclamation"] + KNOB_PROBS["question"])
        return k

    def render(self, k: dict[str, int], rng: np.random.Generator) -> list[str]:
        n_neutral = k["words"] - k["sentiment"] - k["numbers"]
        toks = [("n", self.neutral[int(i)]) for i in rng.integers(0, len(self.neutral), n_neutral)]
        toks += [("s", self.positive[int(i)]) for i in rng.integers(0, len(self.positive), k["sentiment"])]
        if k["numbers"]:
            toks.append(("d", str(int(rng.choice([2, 3, 5, 10, 20, 100, 2019, 2020, 2021, 2022])))))
        order = rng.permutation(len(toks))
        toks = [toks[int(i)] for i in order]
        if k["uppercase"]:
            idx = [i for i, (kind, w) in enumerate(toks) if kind == "n" and len(w) >= 3]
            if idx:
                j = idx[int(rng.integers(0, len(idx)))]
                toks[j] = ("u", toks[j][1].upper())
        words = [w for _, w in toks]
        if words[0][0].islower():
            words[0] = words[0][0].upper() + words[0][1:]
        return words

    @staticmethod
    def join(words: list[str], k: dict[str, int]) -> str:
        s = " ".join(words)
        if k["exclamation"]:
            s += "!"
        elif k["question"]:
            s += "?"
        return s

    def rewrite(self, words: list[str], rng: np.random.Generator) -> list[str]:
        """Swap a random number of neutral words for other neutral words; knobs stay unchanged."""
        neutral = set(self.neutral)
        slots = [i for i, w in enumerate(words) if w.lower() in neutral and not (w.isupper() and len(w) >= 3)]
        out = list(words)
        if not slots:
            return out
        n_sub = int(rng.integers(1, len(slots) + 1))
        for i in rng.choice(slots, size=n_sub, replace=False):
            w = self.neutral[int(rng.integers(0, len(self.neutral)))]
            out[int(i)] = w.capitalize() if int(i) == 0 else w
        return out


def title_effect(knobs: dict[str, int], weights: dict[str, float]) -> float:
    total = 0.0
    for name, w in sorted(weights.items()):
        mu, sd = KNOB_MOMENTS[name]
        total += w * (knobs[name] - mu) / sd
    return total


def _video_id(rng: np.random.Generator, taken: set[str]) -> str:
    while True:
        vid = "".join(_ID_CHARS[int(i)] for i in rng.integers(0, 64, 11))
        if vid not in taken:
            taken.add(vid)
            return vid


def _post_id(i: int) -> str:
    digits = "0123456789abcdefghijklmnopqrstuvwxyz"
    n = i + 36**5
    s = ""
    while n:
        n, r = divmod(n, 36)
        s = digits[r] + s
    return s


def sample_views(cfg: SynthConfig, n: int, rng: np.random.Generator) -> list[int]:
    return [int(round(x)) for x in sample_powerlaw(cfg.views_alpha, cfg.views_x_min, n, rng)]


def sample_subreddit_sizes(cfg: SynthConfig, n: int, rng: np.random.Generator) -> list[int]:
    return [int(round(x)) for x in sample_powerlaw(cfg.subreddit_size_alpha, cfg.subreddit_size_x_min, n, rng)]


@dataclass
class World:
    posts: list[dict]
    videos: list[dict]
    ground_truth: dict

    def write(self, out_dir) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"posts": out / "posts.jsonl", "videos": out / "videos.jsonl", "ground_truth": out / "ground_truth.json"}
        for key in ("posts", "videos"):
            with open(paths[key], "w", encoding="utf-8", newline="\n") as fh:
                for row in getattr(self, key):
                    fh.write(json.dumps(row, sort_keys=True) + "\n")
        with open(paths["ground_truth"], "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.ground_truth, fh, sort_keys=True, indent=1)
            fh.write("\n")
        return paths

    def joined_posts(self) -> list[PostRecord]:
        """Posts parsed and joined exactly as the ingest stage would do it (no subreddit filter)."""
        posts = [post_from_json(p) for p in self.posts]
        catalog = {v["video_id"]: video_from_json(v) for v in self.videos}
        return join_posts_videos(posts, catalog)[0]


def _fresh_title(grammar: TitleGrammar, rng, avoid: str | None):
    while True:
        k = grammar.knobs(rng)
        words = grammar.render(k, rng)
        title = grammar.join(words, k)
        if avoid is None or normalized_ld(title, avoid) < 95:
            return k, words, title


def generate_world(cfg: SynthConfig, lexicons: WordLists | None = None) -> World:
    grammar = TitleGrammar(lexicons)
    rng_v = _rng(cfg, "videos")
    rng_e = _rng(cfg, "events")
    rng_t = _rng(cfg, "titles")
    rng_s = _rng(cfg, "scores")
    rng_sub = _rng(cfg, "subreddits")

    # videos: power-law views, grouped into popularity clusters per category
    taken: set[str] = set()
    views = sample_views(cfg, cfg.n_videos, rng_v)
    videos = []
    for i in range(cfg.n_videos):
        vid = _video_id(rng_v, taken)
        cat = CATEGORIES[int(rng_v.integers(0, len(CATEGORIES)))]
        k, words, title = _fresh_title(grammar, rng_v, None)
        videos.append({"video_id": vid, "title": title, "views": views[i], "category": cat, "tags": [cat.split()[0].lower()]})
    by_cat: dict[str, list[int]] = {c: [] for c in CATEGORIES}
    for i, v in enumerate(videos):
        by_cat[v["category"]].append(i)
    for c in CATEGORIES:
        by_cat[c].sort(key=lambda i: (videos[i]["views"], videos[i]["video_id"]))
    cats = [c for c in CATEGORIES if len(by_cat[c]) >= cfg.cluster_size]

    # subreddits
    subs = [f"sub_{i:03d}" for i in range(cfg.n_subreddits)]
    offsets = {s: float(rng_sub.normal(0.0, cfg.subreddit_sd)) for s in subs}
    sizes = dict(zip(subs, sample_subreddit_sizes(cfg, len(subs), rng_sub)))

    # post skeletons: events of 2-4 posts
    skel = []
    for s in subs:
        left = cfg.posts_per_subreddit
        while left > 0:
            k = min(left, int(rng_e.integers(2, 5)))
            left -= k
            cat = cats[int(rng_e.integers(0, len(cats)))]
            pool = by_cat[cat]
            start = int(rng_e.integers(0, len(pool) - cfg.cluster_size + 1))
            cluster = pool[start : start + cfg.cluster_size]
            t = int(rng_e.integers(T_START, T_END - 86400))
            event_videos: list[int] = []
            for j in range(k):
                if j and rng_e.random() < cfg.same_video_prob:
                    v = event_videos[int(rng_e.integers(0, len(event_videos)))]
                else:
                    v = cluster[int(rng_e.integers(0, len(cluster)))]
                if j:
                    late = rng_e.random() < cfg.late_gap_prob
                    t += int(rng_e.integers(900, 6 * 3600)) if late else int(rng_e.integers(30, 900))
                event_videos.append(v)
                kind = "video" if rng_e.random() >= cfg.non_video_fraction else ("channel" if rng_e.random() < 0.7 else "text")
                skel.append({"sub": s, "event": len(skel) - j, "video": v, "t": t, "kind": kind, "url_form": int(rng_e.integers(0, 3))})

    video_posts = [i for i, p in enumerate(skel) if p["kind"] == "video"]
    n_copy = int(round(cfg.copy_title_fraction * len(video_posts)))
    copies = set(int(i) for i in rng_t.choice(video_posts, size=n_copy, replace=False)) if n_copy else set()

    # titles
    knobs: list[dict | None] = [None] * len(skel)
    words_of: list[list[str] | None] = [None] * len(skel)
    titles: list[str] = [""] * len(skel)
    near_dup_of: dict[int, int] = {}
    for i, p in enumerate(skel):
        vt = videos[p["video"]]["title"]
        if i in copies:
            titles[i] = vt
            continue
        sources = [j for j in range(p["event"], i) if j not in copies and knobs[j] is not None]
        if sources and rng_t.random() < cfg.near_dup_fraction:
            j = sources[int(rng_t.integers(0, len(sources)))]
            w = grammar.rewrite(words_of[j], rng_t)
            title = grammar.join(w, knobs[j])
            if normalized_ld(title, vt) < 95:
                knobs[i], words_of[i], titles[i] = knobs[j], w, title
                near_dup_of[i] = j
                continue
        knobs[i], words_of[i], titles[i] = _fresh_title(grammar, rng_t, vt)

    # scores
    first_seen: dict[tuple[str, int], int] = {}
    for p in sorted(skel, key=lambda p: p["t"]):
        first_seen.setdefault((p["sub"], p["video"]), p["t"])
    posts = []
    for i, p in enumerate(skel):
        v = videos[p["video"]]
        lv = min(max(math.log10(max(v["views"], 1)), 3.0), 8.0) - 5.0
        age = p["t"] - first_seen[(p["sub"], p["video"])]
        x = cfg.beta0 + offsets[p["sub"]] + cfg.beta_views * lv
        x -= cfg.exposure_weight * (1.0 - math.exp(-age / cfg.exposure_halflife))
        if i not in copies and knobs[i] is not None:
            x += title_effect(knobs[i], cfg.title_effect_weights) + cfg.rewrite_bonus
        x += float(rng_s.normal(0.0, cfg.noise_sd))
        score = max(0, int(round(math.exp(min(x, 30.0)))))
        row = {"id": _post_id(i), "subreddit": p["sub"], "title": titles[i], "created_utc": p["t"], "score": score}
        if p["kind"] == "video":
            vid = v["video_id"]
            row["url"] = (canonical_watch_url(vid), f"https://youtu.be/{vid}", f"https://m.youtube.com/watch?v={vid}&t=10")[p["url_form"]]
        elif p["kind"] == "channel":
            row["url"] = f"https://www.youtube.com/channel/UC{v['video_id']}"
        else:
            row["post_type"] = "text"
        posts.append(row)

    truth = {
        "config": cfg.to_dict(),
        "knob_moments": {k: list(v) for k, v in KNOB_MOMENTS.items()},
        "subreddit_offsets": offsets,
        "subreddit_n_users": sizes,
        "n_posts": len(posts),
        "n_video_posts": len(video_posts),
        "n_copy_titles": n_copy,
        "copy_title_post_ids": sorted(_post_id(i) for i in copies),
        "near_duplicates": {_post_id(i): _post_id(j) for i, j in sorted(near_dup_of.items())},
    }
    return World(posts=posts, videos=videos, ground_truth=truth)
