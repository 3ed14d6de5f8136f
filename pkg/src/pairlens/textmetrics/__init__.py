"""Title metrics: similarity, structure, lexical diversity, readability, style and sentiment."""

from .features import (
    BINARY,
    COLUMNS,
    CONTINUOUS,
    ExternalScoresError,
    TitleFeatureVector,
    extract_features,
    load_external_scores,
    read_features_csv,
    write_features_csv,
)
from .levenshtein import normalized_ld, weighted_edit_distance
from .lexicons import LexiconError, WordLists, default_lexicons, load_lexicons
from .metrics import lexical_diversity, mtld, readability, structural
from .stylistic import lexicon_sentiment_binary, stylistic_flags
from .tokens import TextMetricError
from .vader import vader_scores

__all__ = [
    "BINARY",
    "COLUMNS",
    "CONTINUOUS",
    "ExternalScoresError",
    "LexiconError",
    "TextMetricError",
    "TitleFeatureVector",
    "WordLists",
    "default_lexicons",
    "extract_features",
    "lexical_diversity",
    "lexicon_sentiment_binary",
    "load_external_scores",
    "load_lexicons",
    "mtld",
    "normalized_ld",
    "readability",
    "read_features_csv",
    "structural",
    "stylistic_flags",
    "vader_scores",
    "weighted_edit_distance",
    "write_features_csv",
]
