"""Full per-title feature vector and the features.csv / external_scores.csv formats."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Mapping

from .lexicons import WordLists, default_lexicons
from .metrics import lexical_diversity, readability, structural
from .stylistic import lexicon_sentiment_binary, stylistic_flags
from .vader import vader_scores

log = logging.getLogger(__name__)

CONTINUOUS = (
    "chars",
    "words",
    "avg_word_len",
    "avg_sent_len",
    "ttr",
    "cttr",
    "mtld",
    "ari",
    "cli",
    "fk_grade",
    "fr_ease_reversed",
    "gunning_fog",
    "vader_pos",
    "vader_neu",
    "vader_neg",
    "vader_compound",
)
BINARY = (
    "excl_mark",
    "question_mark",
    "quotation_mark",
    "numbers",
    "emoji",
    "uppercase",
    "repeated_chars",
    "pronouns",
    "interrogatives",
    "tentative",
    "certainty",
    "affiliation",
    "tb_subjectivity",
    "tb_polarity",
    "swn_polarity",
    "nrc_emotion",
)


@dataclass(frozen=True)
class TitleFeatureVector:
    chars: int
    words: int
    avg_word_len: float
    avg_sent_len: float
    ttr: float
    cttr: float
    mtld: float
    ari: float
    cli: float
    fk_grade: float
    fr_ease_reversed: float
    gunning_fog: float
    vader_pos: float
    vader_neu: float
    vader_neg: float
    vader_compound: float
    excl_mark: int
    question_mark: int
    quotation_mark: int
    numbers: int
    emoji: int
    uppercase: int
    repeated_chars: int
    pronouns: int
    interrogatives: int
    tentative: int
    certainty: int
    affiliation: int
    tb_subjectivity: int
    tb_polarity: int
    swn_polarity: int
    nrc_emotion: int

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


COLUMNS = tuple(f.name for f in fields(TitleFeatureVector))
assert COLUMNS == CONTINUOUS + BINARY


def extract_features(title: str, lexicons: WordLists | None = None) -> TitleFeatureVector:
    lex = lexicons or default_lexicons()
    vals: dict[str, float] = {}
    vals.update(structural(title))
    vals.update(lexical_diversity(title))
    vals.update(readability(title))
    v = vader_scores(title, lex.valence)
    vals.update(vader_pos=v["pos"], vader_neu=v["neu"], vader_neg=v["neg"], vader_compound=v["compound"])
    vals.update(stylistic_flags(title, lex))
    vals.update(lexicon_sentiment_binary(title, lex))
    return TitleFeatureVector(**vals)


def _fmt(x: float) -> str:
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def write_features_csv(path, features: Mapping[str, Mapping[str, float]], extra_columns: Iterable[str] = ()) -> None:
    """One row per post_id: COLUMNS in fixed order, then any external score columns."""
    extra = list(extra_columns)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["post_id", *COLUMNS, *extra])
        for pid in sorted(features):
            row = features[pid]
            w.writerow([pid, *(_fmt(row[c]) for c in COLUMNS), *(_fmt(row[c]) for c in extra)])


def read_features_csv(path) -> dict[str, dict[str, float]]:
    out: dict[str, dict[str, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            pid = row.pop("post_id")
            out[pid] = {k: (int(v) if k in BINARY or k in ("chars", "words") else float(v)) for k, v in row.items()}
    return out


class ExternalScoresError(ValueError):
    pass


def load_external_scores(path, known_ids: Iterable[str] | None = None) -> dict[str, dict[str, float]]:
    """Read ``post_id,<score>...`` rows; duplicates are an error, unknown ids are dropped."""
    known = set(known_ids) if known_ids is not None else None
    out: dict[str, dict[str, float]] = {}
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "post_id" or len(header) < 2:
            raise ExternalScoresError("external scores need a 'post_id,<score>...' header")
        names = header[1:]
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            pid = row[0]
            if pid in seen:
                raise ExternalScoresError(f"duplicate post_id {pid!r} at line {lineno}")
            seen.add(pid)
            try:
                scores = {n: float(x) for n, x in zip(names, row[1:], strict=True)}
            except ValueError as exc:
                raise ExternalScoresError(f"line {lineno}: {exc}") from exc
            if not all(math.isfinite(x) for x in scores.values()):
                raise ExternalScoresError(f"line {lineno}: non-finite score")
            if known is not None and pid not in known:
                log.warning("external score for unknown post_id %s dropped", pid)
                continue
            out[pid] = scores
    return out
