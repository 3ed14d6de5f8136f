"""Loading of the word lists and valence lexicons used by the title metrics.

Every lexicon is a UTF-8 text file with one ``token<TAB>value`` entry per line.
Category lists use the value ``1``; the valence and polarity lexicons carry
real-valued scores. The defaults bundled with the package live in
``pairlens/lexicons`` and can be replaced by pointing at another directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

WORD_CLASSES = ("pronouns", "interrogatives", "tentative", "certainty", "affiliation")
SENTIMENT_LEXICONS = ("tb_subjectivity", "tb_polarity", "swn_polarity", "nrc_emotion")
VALENCE_FILE = "vader_valence"

DEFAULT_DIR = Path(__file__).resolve().parent.parent / "lexicons"
ENV_VAR = "PAIRLENS_LEXICON_DIR"


class LexiconError(Exception):
    """Raised when a lexicon directory or file is missing or malformed."""


def read_lexicon(path: Path) -> dict[str, float]:
    if not path.is_file():
        raise LexiconError(f"missing lexicon file: {path}")
    out: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise LexiconError(f"{path}:{lineno}: expected token<TAB>value")
            try:
                out[parts[0]] = float(parts[1])
            except ValueError as exc:
                raise LexiconError(f"{path}:{lineno}: bad value {parts[1]!r}") from exc
    return out


@dataclass(frozen=True)
class WordLists:
    valence: dict[str, float]
    classes: dict[str, frozenset[str]] = field(default_factory=dict)
    sentiment: dict[str, frozenset[str]] = field(default_factory=dict)
    source: str = ""


def resolve_dir(path: str | os.PathLike | None = None) -> Path:
    if path is None:
        path = os.environ.get(ENV_VAR) or DEFAULT_DIR
    p = Path(path)
    if not p.is_dir():
        raise LexiconError(f"lexicon directory not found: {p}")
    return p


def load_lexicons(path: str | os.PathLike | None = None) -> WordLists:
    """Load every lexicon from ``path`` (or $PAIRLENS_LEXICON_DIR, or the bundled set)."""
    root = resolve_dir(path)
    valence = read_lexicon(root / f"{VALENCE_FILE}.tsv")
    classes = {
        name: frozenset(k.lower() for k, v in read_lexicon(root / f"{name}.tsv").items() if v)
        for name in WORD_CLASSES
    }
    sentiment = {
        name: frozenset(k.lower() for k, v in read_lexicon(root / f"{name}.tsv").items() if v)
        for name in SENTIMENT_LEXICONS
    }
    return WordLists(valence=valence, classes=classes, sentiment=sentiment, source=str(root))


_default: WordLists | None = None


def default_lexicons() -> WordLists:
    global _default
    if _default is None:
        _default = load_lexicons(DEFAULT_DIR)
    return _default
