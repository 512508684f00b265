"""Deterministic synthetic groups with prescribed mean, variance and kurtosis.

Raw scores behind published summary tables are rarely available; these
surrogates reproduce the summaries exactly (mean, unbiased variance) and
the non-excess kurtosis to within 1e-9.
"""

from __future__ import annotations

import math

import numpy as np

from .descr import GroupSample, kurtosis
from .errors import ConvergenceError, DomainError

# Target (mean, variance, kurtosis) for three rating groups of n = 26.
SURROGATE_SUMMARIES = {
    "group1": (5.5769, 3.1338, 1.7971),
    "group2": (7.3846, 3.2862, 6.9602),
    "group3": (7.3077, 2.4615, 6.4978),
}
SURROGATE_N = 26


def _shape(n: int, power: float) -> np.ndarray:
    u = (np.arange(n) + 0.5) / n * 2.0 - 1.0
    z = np.sign(u) * np.abs(u) ** power
    # mild asymmetry so groups are not mirror images of each other
    z = z + 0.15 * (z * z - np.mean(z * z))
    return z


def _kurt(n: int, power: float) -> float:
    return kurtosis(_shape(n, power))


def standard_shape(n: int, target_kurtosis: float) -> np.ndarray:
    """n values with mean 0, unbiased variance 1 and the requested kurtosis."""
    if n < 4:
        raise DomainError("need n >= 4")
    lo, hi = 0.05, 30.0
    k_lo, k_hi = _kurt(n, lo), _kurt(n, hi)
    if not k_lo <= target_kurtosis <= k_hi:
        raise DomainError(f"kurtosis {target_kurtosis} not reachable for n={n} (range {k_lo:.3f}..{k_hi:.3f})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        k = _kurt(n, mid)
        if abs(k - target_kurtosis) < 1e-12:
            break
        if k < target_kurtosis:
            lo = mid
        else:
            hi = mid
    else:
        raise ConvergenceError("shape search did not converge")
    z = _shape(n, mid)
    z = z - z.mean()
    return z / math.sqrt(np.sum(z * z) / (n - 1))


def group_with_summary(gid: str, mean: float, variance: float, kurt: float, n: int) -> GroupSample:
    z = standard_shape(n, kurt)
    scores = mean + math.sqrt(variance) * z
    # re-centre to remove rounding drift in the mean
    scores = scores - (scores.mean() - mean)
    return GroupSample(gid, scores)


def surrogate_groups() -> list[GroupSample]:
    """Three n = 26 surrogate groups matching SURROGATE_SUMMARIES."""
    return [group_with_summary(gid, m, v, k, SURROGATE_N) for gid, (m, v, k) in SURROGATE_SUMMARIES.items()]
