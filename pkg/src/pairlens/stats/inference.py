"""Paired and unpaired hypothesis tests, effect sizes and correlations.

All p-values are two-sided. Direction is reported separately as one of
``group1_larger``, ``group1_smaller`` or ``none``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special import chi2_sf, norm_cdf, norm_sf_two_sided, t_sf_two_sided

GROUP1_LARGER = "group1_larger"
GROUP1_SMALLER = "group1_smaller"
NO_DIRECTION = "none"

WILCOXON_EXACT_MAX_N = 25
MCNEMAR_EXACT_MAX = 25


class DegenerateSampleError(ValueError):
    pass


def _direction(x: float) -> str:
    if x > 0:
        return GROUP1_LARGER
    if x < 0:
        return GROUP1_SMALLER
    return NO_DIRECTION


@dataclass(frozen=True)
class PairedTResult:
    t: float
    p_two_sided: float
    direction: str
    n: int
    mean: float


def paired_t_test(diffs: Sequence[float]) -> PairedTResult:
    d = np.asarray(diffs, dtype=float)
    n = d.size
    if n < 2:
        raise DegenerateSampleError("need at least two differences")
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        raise DegenerateSampleError("degenerate sample")
    t = mean / (sd / math.sqrt(n))
    return PairedTResult(t=t, p_two_sided=t_sf_two_sided(t, n - 1), direction=_direction(mean), n=n, mean=mean)


@dataclass(frozen=True)
class WelchResult:
    t: float
    df: float
    p_two_sided: float
    direction: str


def welch_t_test(x: Sequence[float], y: Sequence[float]) -> WelchResult:
    """Unequal-variance two-sample t-test of mean(x) vs mean(y)."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.size < 2 or b.size < 2:
        raise DegenerateSampleError("each group needs at least two values")
    va = float(a.var(ddof=1)) / a.size
    vb = float(b.var(ddof=1)) / b.size
    diff = float(a.mean() - b.mean())
    se2 = va + vb
    if se2 == 0.0:
        if diff == 0.0:
            return WelchResult(t=0.0, df=float(a.size + b.size - 2), p_two_sided=1.0, direction=NO_DIRECTION)
        raise DegenerateSampleError("zero variance in both groups with different means")
    t = diff / math.sqrt(se2)
    df = se2**2 / (va**2 / (a.size - 1) + vb**2 / (b.size - 1))
    return WelchResult(t=t, df=float(df), p_two_sided=t_sf_two_sided(t, df), direction=_direction(diff))


def midranks(values: Sequence[float]) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    sorted_v = v[order]
    ranks = np.empty(v.size, dtype=float)
    i = 0
    n = v.size
    while i < n:
        j = i
        while j + 1 < n and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class WilcoxonResult:
    w: float
    w_plus: float
    w_minus: float
    p_two_sided: float
    r_rb: float
    direction: str
    n: int
    exact: bool


def _signed_rank_null_cdf(doubled_ranks: np.ndarray, stat2: int) -> float:
    """P(T <= stat) under random signs; ranks are doubled so mid-ranks stay integral."""
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=object)
    counts[0] = 1
    reach = 0
    for r in doubled_ranks.astype(int):
        counts[r : reach + r + 1] = counts[r : reach + r + 1] + counts[: reach + 1]
        reach += r
    n = doubled_ranks.size
    return float(sum(counts[: stat2 + 1])) / float(2**n)


def wilcoxon_signed_rank(diffs: Sequence[float], exact_max_n: int = WILCOXON_EXACT_MAX_N) -> WilcoxonResult:
    d = np.asarray(diffs, dtype=float)
    d = d[d != 0]
    n = d.size
    if n == 0:
        raise DegenerateSampleError("all differences are zero")
    ranks = midranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)
    r_rb = (w_plus - w_minus) / (w_plus + w_minus)
    exact = n <= exact_max_n
    if exact:
        doubled = np.rint(2 * ranks).astype(int)
        p = min(1.0, 2.0 * float(_signed_rank_null_cdf(doubled, int(round(2 * w)))))
    else:
        mu = n * (n + 1) / 4.0
        _, tie_counts = np.unique(np.abs(d), return_counts=True)
        tie_term = float(((tie_counts**3 - tie_counts)).sum()) / 48.0
        var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
        if var <= 0:
            p = 1.0
        else:
            z = (w - mu + 0.5) / math.sqrt(var)
            p = min(1.0, 2.0 * norm_cdf(z))
    return WilcoxonResult(
        w=w,
        w_plus=w_plus,
        w_minus=w_minus,
        p_two_sided=p,
        r_rb=abs(r_rb),
        direction=_direction(w_plus - w_minus),
        n=n,
        exact=exact,
    )


@dataclass(frozen=True)
class McNemarResult:
    statistic: float
    p_two_sided: float
    exact: bool
    b: int
    c: int


def mcnemar(b: int, c: int, exact_below: int = MCNEMAR_EXACT_MAX) -> McNemarResult:
    """McNemar test on discordant counts: exact binomial below ``exact_below``, else corrected chi-square."""
    if b < 0 or c < 0:
        raise ValueError("counts must be non-negative")
    n = b + c
    if n == 0:
        raise DegenerateSampleError("no discordant pairs")
    if n < exact_below:
        k = min(b, c)
        tail = sum(math.comb(n, i) for i in range(k + 1))
        p = min(1.0, 2.0 * tail / 2**n)
        return McNemarResult(statistic=float(k), p_two_sided=p, exact=True, b=b, c=c)
    stat = (abs(b - c) - 1) ** 2 / n
    return McNemarResult(statistic=stat, p_two_sided=chi2_sf(stat, 1), exact=False, b=b, c=c)


@dataclass(frozen=True)
class K2Result:
    k2: float
    p: float
    z_skew: float
    z_kurt: float


def dagostino_k2(sample: Sequence[float]) -> K2Result:
    """D'Agostino-Pearson omnibus normality test (skewness and kurtosis z-scores)."""
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n < 20:
        raise DegenerateSampleError("D'Agostino K2 needs n >= 20")
    dev = x - x.mean()
    m2 = float(np.mean(dev**2))
    if m2 == 0:
        raise DegenerateSampleError("degenerate sample")
    m3 = float(np.mean(dev**3))
    m4 = float(np.mean(dev**4))
    b1 = m3 / m2**1.5
    b2 = m4 / m2**2

    # skewness transformation
    y = b1 * math.sqrt((n + 1) * (n + 3) / (6.0 * (n - 2)))
    beta2 = 3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3) / ((n - 2.0) * (n + 5) * (n + 7) * (n + 9))
    w2 = -1.0 + math.sqrt(2 * (beta2 - 1))
    delta = 1 / math.sqrt(0.5 * math.log(w2))
    alpha = math.sqrt(2.0 / (w2 - 1))
    y = y if y != 0 else 1.0e-300
    z_skew = delta * math.log(y / alpha + math.sqrt((y / alpha) ** 2 + 1))

    # kurtosis transformation (Anscombe & Glynn)
    e = 3.0 * (n - 1) / (n + 1)
    var_b2 = 24.0 * n * (n - 2) * (n - 3) / ((n + 1.0) ** 2 * (n + 3) * (n + 5))
    xk = (b2 - e) / math.sqrt(var_b2)
    sqrt_beta1 = (
        6.0 * (n * n - 5 * n + 2) / ((n + 7.0) * (n + 9))
        * math.sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2.0) * (n - 3)))
    )
    a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + math.sqrt(1 + 4.0 / sqrt_beta1**2))
    term1 = 1 - 2 / (9.0 * a)
    denom = 1 + xk * math.sqrt(2 / (a - 4.0))
    term2 = math.copysign(1.0, denom) * ((1 - 2.0 / a) / abs(denom)) ** (1 / 3.0) if denom != 0 else float("nan")
    z_kurt = (term1 - term2) / math.sqrt(2 / (9.0 * a))

    k2 = z_skew**2 + z_kurt**2
    return K2Result(k2=k2, p=chi2_sf(k2, 2), z_skew=z_skew, z_kurt=z_kurt)


def bonferroni(alpha: float, m: int) -> float:
    if m < 1:
        raise ValueError("m must be >= 1")
    return alpha / m


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.size != b.size:
        raise ValueError("length mismatch")
    if a.size < 3:
        raise DegenerateSampleError("need n >= 3")
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0:
        raise DegenerateSampleError("constant input")
    return max(-1.0, min(1.0, float(da @ db) / denom))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    return pearson(midranks(x), midranks(y))


def correlation_p(r: float, n: int) -> float:
    """Two-sided p for H0: rho = 0 via the t transform with n - 2 df."""
    if n < 3:
        raise DegenerateSampleError("need n >= 3")
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1 - r * r))
    return t_sf_two_sided(t, n - 2)


def norm_p_two_sided(z: float) -> float:
    return norm_sf_two_sided(z)
