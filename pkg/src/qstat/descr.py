"""Descriptive statistics for opinion-score groups (MOS, SOS, PDU, ...)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateDataError, DomainError, InsufficientDataError


@dataclass(frozen=True, eq=False)
class GroupSample:
    """Scores collected for one condition."""

    id: str
    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float).ravel()
        if scores.size == 0:
            raise InsufficientDataError(f"group {self.id!r} has no scores")
        if not np.all(np.isfinite(scores)):
            raise DomainError(f"group {self.id!r} contains non-finite scores")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    @property
    def n(self) -> int:
        return int(self.scores.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, GroupSample):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.scores, other.scores)


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    variance: float
    kurtosis: float
    sos: float
    skewness: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "sos": self.sos,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
        }


def _central(x: np.ndarray) -> tuple[float, float, float, float]:
    """Mean, divisor-n m2, and the scale-free ratios m3/m2^1.5 and m4/m2^2."""
    mean = float(np.mean(x))
    d = x - mean
    m2 = float(np.mean(d * d))
    scale = float(np.max(np.abs(d)))
    if m2 == 0.0 or scale == 0.0:
        return mean, m2, math.nan, math.nan
    # rescale first so tiny or huge spreads neither underflow nor overflow
    z = d / scale
    z2 = z * z
    s2 = float(np.mean(z2))
    return mean, m2, float(np.mean(z2 * z)) / s2**1.5, float(np.mean(z2 * z2)) / (s2 * s2)


def moments(g: GroupSample) -> SummaryStats:
    """MOS, unbiased variance, SOS, skewness and non-excess kurtosis.

    Skewness and kurtosis use divisor-n central moments. For a constant
    group they are undefined and reported as NaN; use :func:`kurtosis`
    to get an error instead.
    """
    if g.n < 2:
        raise InsufficientDataError(f"group {g.id!r}: need at least 2 scores for a variance")
    mean, m2, skew, kurt = _central(g.scores)
    if m2 == 0.0 or math.isnan(kurt):
        return SummaryStats(g.n, mean, 0.0, math.nan, 0.0, math.nan)
    variance = m2 * g.n / (g.n - 1)
    return SummaryStats(
        n=g.n,
        mean=mean,
        variance=variance,
        kurtosis=kurt,
        sos=math.sqrt(variance),
        skewness=skew,
    )


def kurtosis(scores) -> float:
    """Non-excess sample kurtosis m4 / m2**2 (normal = 3)."""
    x = np.asarray(scores, dtype=float)
    if x.size < 2:
        raise InsufficientDataError("kurtosis needs at least 2 values")
    _, _, _, kurt = _central(x)
    if math.isnan(kurt):
        raise DegenerateDataError("kurtosis undefined for zero variance")
    return kurt


def skewness(scores) -> float:
    x = np.asarray(scores, dtype=float)
    if x.size < 2:
        raise InsufficientDataError("skewness needs at least 2 values")
    _, _, skew, _ = _central(x)
    if math.isnan(skew):
        raise DegenerateDataError("skewness undefined for zero variance")
    return skew


def pooled_variance(s1_sq: float, n1: int, s2_sq: float, n2: int) -> float:
    """Pooled two-sample variance, weights n_i - 1."""
    if n1 < 2 or n2 < 2:
        raise InsufficientDataError("pooled variance needs n1, n2 >= 2")
    if s1_sq < 0 or s2_sq < 0:
        raise DomainError("variances must be non-negative")
    if n1 == n2:
        return (s1_sq + s2_sq) / 2.0
    return (s1_sq * (n1 - 1) + s2_sq * (n2 - 1)) / (n1 + n2 - 2)


def grand_mean(groups: Sequence[GroupSample]) -> float:
    """Mean over all observations of all groups."""
    if not groups:
        raise InsufficientDataError("grand mean of no groups")
    total = sum(float(np.sum(g.scores)) for g in groups)
    return total / sum(g.n for g in groups)


def pdu(g: GroupSample, threshold: float) -> float:
    """Fraction of scores strictly below ``threshold`` (dissatisfied users)."""
    return float(np.count_nonzero(g.scores < threshold)) / g.n


def summary_table(groups: Sequence[GroupSample], pdu_threshold: float | None = None) -> list[dict]:
    rows = []
    for g in groups:
        row = {"condition": g.id, **moments(g).to_dict()}
        if pdu_threshold is not None:
            row["pdu"] = pdu(g, pdu_threshold)
        rows.append(row)
    return rows
