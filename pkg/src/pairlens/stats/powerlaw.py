"""Continuous power-law maximum-likelihood fit and inverse-CDF sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class PowerLawError(ValueError):
    pass


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    sigma: float
    x_min: float
    n: int


def powerlaw_fit(sample: Sequence[float], x_min: float, min_n: int = 10) -> PowerLawFit:
    """MLE exponent of p(x) ~ x^-alpha for x >= x_min, with its standard error."""
    if x_min <= 0:
        raise PowerLawError("x_min must be positive")
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n < min_n:
        raise PowerLawError(f"need at least {min_n} values, got {n}")
    if np.any(x < x_min):
        raise PowerLawError("all values must be >= x_min")
    s = float(np.sum(np.log(x / x_min)))
    if s <= 0:
        raise PowerLawError("log-sum is zero: every value equals x_min")
    alpha = 1.0 + n / s
    return PowerLawFit(alpha=alpha, sigma=(alpha - 1.0) / math.sqrt(n), x_min=float(x_min), n=n)


def sample_powerlaw(alpha: float, x_min: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` values from the continuous power law by inverting its CDF."""
    if alpha <= 1:
        raise PowerLawError("alpha must be > 1")
    u = rng.random(n)
    return x_min * (1.0 - u) ** (-1.0 / (alpha - 1.0))
