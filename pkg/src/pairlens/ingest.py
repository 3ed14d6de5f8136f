"""Parsing of post/video JSON-lines dumps, video-ID normalization, joining and
subreddit filtering."""

from __future__ import annotations

import csv
import io
import json
import logging
import re
import statistics
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field, replace
from typing import IO, Iterable, Iterator
from urllib.parse import parse_qs, urlsplit

log = logging.getLogger(__name__)

VIDEO_ID_RE = re.compile(r"[A-Za-z0-9_-]{11}")
WATCH_HOSTS = frozenset({"www.youtube.com", "youtube.com", "m.youtube.com"})
SHORT_HOSTS = frozenset({"youtu.be", "www.youtu.be"})


class IngestError(Exception):
    pass


@dataclass(frozen=True)
class PostRecord:
    post_id: str
    subreddit: str
    title: str
    created_at: int
    score: int
    video_id: str | None
    post_type: str = "video"
    # filled by join_posts_videos
    video_views: int | None = None
    video_category: str | None = None
    video_title: str | None = None

    @property
    def droppable(self) -> bool:
        return self.video_id is None


@dataclass(frozen=True)
class VideoRecord:
    video_id: str
    title: str
    views: int
    category: str
    tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class SubredditSummary:
    subreddit: str
    n_posts: int
    mean_score: float
    median_score: float
    n_users: int | None = None


@dataclass
class ParseStats:
    n_read: int = 0
    n_ok: int = 0
    n_skipped: int = 0
    n_duplicates: int = 0
    n_without_video: int = 0
    errors: list[str] = field(default_factory=list)


def _full_match_id(token: str) -> str | None:
    return token if VIDEO_ID_RE.fullmatch(token) else None


def extract_video_id(url: str) -> str | None:
    """Return the 11-character id of a direct video watch link, else None."""
    if not isinstance(url, str):
        return None
    url = url.strip()
    if not url:
        return None
    if "://" not in url:
        url = "https://" + url
    try:
        parts = urlsplit(url)
    except ValueError:
        return None
    host = (parts.hostname or "").lower()
    if host in SHORT_HOSTS:
        segs = [s for s in parts.path.split("/") if s]
        return _full_match_id(segs[0]) if len(segs) == 1 else None
    if host in WATCH_HOSTS and parts.path.rstrip("/") == "/watch":
        vals = parse_qs(parts.query).get("v")
        return _full_match_id(vals[0]) if vals else None
    return None


def canonical_watch_url(video_id: str) -> str:
    return f"https://www.youtube.com/watch?v={video_id}"


def _as_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
        raise ValueError(f"{name} must be an integer")
    return int(value)


def post_from_json(obj: dict) -> PostRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise ValueError("missing id")
    created = _as_int(obj.get("created_utc"), "created_utc")
    if created <= 0:
        raise ValueError("created_utc must be positive")
    video_id = obj.get("video_id")
    if video_id is not None:
        video_id = _full_match_id(str(video_id))
    elif obj.get("url") is not None:
        video_id = extract_video_id(obj["url"])
    post_type = obj.get("post_type", "video")
    if post_type not in ("video", "text"):
        raise ValueError(f"bad post_type {post_type!r}")
    title = obj.get("title", "")
    if not isinstance(title, str):
        raise ValueError("title must be a string")
    return PostRecord(
        post_id=pid,
        subreddit=str(obj.get("subreddit", "")),
        title=title,
        created_at=created,
        score=_as_int(obj.get("score"), "score"),
        video_id=video_id,
        post_type=post_type,
    )


def _lines(stream: IO) -> Iterator[str]:
    for raw in stream:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8", errors="replace")
        yield raw


def parse_posts(stream: IO, stats: ParseStats | None = None) -> Iterator[PostRecord]:
    """Yield one PostRecord per valid line; malformed lines and repeated ids are skipped."""
    stats = stats if stats is not None else ParseStats()
    seen: set[str] = set()
    try:
        for lineno, line in enumerate(_lines(stream), 1):
            if not line.strip():
                continue
            stats.n_read += 1
            try:
                rec = post_from_json(json.loads(line))
            except (ValueError, TypeError) as exc:
                stats.n_skipped += 1
                stats.errors.append(f"line {lineno}: {exc}")
                continue
            if rec.post_id in seen:
                stats.n_duplicates += 1
                log.warning("duplicate post id %s on line %d ignored", rec.post_id, lineno)
                continue
            seen.add(rec.post_id)
            if rec.video_id is None:
                stats.n_without_video += 1
            stats.n_ok += 1
            yield rec
    except OSError as exc:
        raise IngestError(f"reading posts failed: {exc}") from exc


def video_from_json(obj: dict) -> VideoRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    vid = obj.get("video_id")
    if not isinstance(vid, str) or not VIDEO_ID_RE.fullmatch(vid):
        raise ValueError("bad video_id")
    views = _as_int(obj.get("views"), "views")
    if views < 0:
        raise ValueError("views must be non-negative")
    tags = obj.get("tags") or []
    if not isinstance(tags, list):
        raise ValueError("tags must be a list")
    return VideoRecord(
        video_id=vid,
        title=str(obj.get("title", "")),
        views=views,
        category=str(obj.get("category", "")),
        tags=tuple(str(t) for t in tags),
    )


def parse_videos(stream: IO, stats: ParseStats | None = None) -> dict[str, VideoRecord]:
    """Build the video catalog; on a repeated id the record with more views wins."""
    stats = stats if stats is not None else ParseStats()
    catalog: dict[str, VideoRecord] = {}
    try:
        for lineno, line in enumerate(_lines(stream), 1):
            if not line.strip():
                continue
            stats.n_read += 1
            try:
                rec = video_from_json(json.loads(line))
            except (ValueError, TypeError) as exc:
                stats.n_skipped += 1
                stats.errors.append(f"line {lineno}: {exc}")
                continue
            old = catalog.get(rec.video_id)
            if old is not None:
                stats.n_duplicates += 1
                log.info("video %s seen twice (views %d vs %d)", rec.video_id, old.views, rec.views)
                if rec.views <= old.views:
                    continue
            catalog[rec.video_id] = rec
            stats.n_ok += 1
    except OSError as exc:
        raise IngestError(f"reading videos failed: {exc}") from exc
    return catalog


def join_posts_videos(posts: Iterable[PostRecord], catalog: dict[str, VideoRecord]) -> tuple[list[PostRecord], float]:
    """Attach video metadata; posts whose video is unknown are dropped. Returns (joined, join_rate)."""
    joined = []
    total = 0
    for p in posts:
        total += 1
        v = catalog.get(p.video_id) if p.video_id else None
        if v is None:
            continue
        joined.append(replace(p, video_views=v.views, video_category=v.category, video_title=v.title))
    rate = len(joined) / total if total else 0.0
    return joined, rate


def summarize(posts: Iterable[PostRecord], n_users: dict[str, int] | None = None) -> list[SubredditSummary]:
    by_sub: dict[str, list[int]] = defaultdict(list)
    for p in posts:
        by_sub[p.subreddit].append(p.score)
    n_users = n_users or {}
    return [
        SubredditSummary(
            subreddit=s,
            n_posts=len(scores),
            mean_score=statistics.fmean(scores),
            median_score=float(statistics.median(scores)),
            n_users=n_users.get(s),
        )
        for s, scores in sorted(by_sub.items())
    ]


def filter_subreddits(
    posts: Iterable[PostRecord],
    min_posts: int = 1000,
    top_k: int | None = 5000,
    n_users: dict[str, int] | None = None,
) -> tuple[list[PostRecord], list[SubredditSummary]]:
    """Keep subreddits with at least ``min_posts`` valid posts, then the ``top_k`` largest.

    A valid post is a video post with a non-empty title. Ties in the top-k cut
    are broken by subreddit name.
    """
    if min_posts < 1:
        raise ValueError("min_posts must be >= 1")
    valid = [p for p in posts if p.title.strip() and p.post_type == "video"]
    counts = Counter(p.subreddit for p in valid)
    eligible = [s for s, c in counts.items() if c >= min_posts]
    eligible.sort(key=lambda s: (-counts[s], s))
    if top_k is not None:
        eligible = eligible[:top_k]
    keep = set(eligible)
    kept = [p for p in valid if p.subreddit in keep]
    return kept, summarize(kept, n_users)


# -- serialization ---------------------------------------------------------

def post_to_json(p: PostRecord, joined: bool = True) -> dict:
    d = {
        "id": p.post_id,
        "subreddit": p.subreddit,
        "title": p.title,
        "created_utc": p.created_at,
        "score": p.score,
        "video_id": p.video_id,
        "post_type": p.post_type,
    }
    if joined:
        d.update(video_views=p.video_views, video_category=p.video_category, video_title=p.video_title)
    return d


def joined_from_json(obj: dict) -> PostRecord:
    p = post_from_json(obj)
    return replace(
        p,
        video_views=obj.get("video_views"),
        video_category=obj.get("video_category"),
        video_title=obj.get("video_title"),
    )


def write_jsonl(path, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def read_joined(path) -> list[PostRecord]:
    with open(path, encoding="utf-8") as fh:
        return [joined_from_json(json.loads(line)) for line in fh if line.strip()]


def write_subreddits_csv(path, summaries: Iterable[SubredditSummary]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["subreddit", "n_posts", "mean_score", "median_score"])
        for s in summaries:
            w.writerow([s.subreddit, s.n_posts, repr(s.mean_score), repr(s.median_score)])


def parse_posts_text(text: str) -> tuple[list[PostRecord], ParseStats]:
    stats = ParseStats()
    return list(parse_posts(io.StringIO(text), stats)), stats


def summary_dict(s: SubredditSummary) -> dict:
    return asdict(s)
