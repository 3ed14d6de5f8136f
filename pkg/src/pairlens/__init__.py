"""pairlens: confound-controlled post pairs, title metrics and pairwise ranking."""

__version__ = "0.1.0"
