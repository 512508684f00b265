"""Permutation engine for null sampling distributions of t and F.

Each iteration pools every observation, shuffles without replacement and
deals the scores back into groups of the original sizes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import dist
from .descr import GroupSample
from .errors import DomainError, InsufficientDataError
from .rng import RngSeed, map_blocks
from .stattests import Tail, anova_f_batch, pooled_t_batch

DEFAULT_BINS = 100


class StatisticKind(str, Enum):
    T_POOLED = "t_pooled"
    F_ANOVA = "f_anova"


@dataclass(frozen=True)
class HistogramData:
    bin_edges: np.ndarray
    densities: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_left", "bin_right", "density"])
        for lo, hi, d in zip(self.bin_edges[:-1], self.bin_edges[1:], self.densities):
            w.writerow([f"{lo:.9g}", f"{hi:.9g}", f"{d:.9g}"])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


@dataclass
class EmpiricalDistribution:
    values: np.ndarray
    statistic_kind: StatisticKind
    reference: dist.DistSpec
    ks_distance: float
    histogram: HistogramData | None
    n_iter: int
    n_degenerate: int = 0

    @property
    def mean(self) -> float:
        return float(np.mean(self.values)) if self.values.size else math.nan

    def summary(self) -> dict:
        return {
            "statistic_kind": StatisticKind(self.statistic_kind).value,
            "reference": self.reference.to_dict(),
            "n_iter": self.n_iter,
            "n_values": int(self.values.size),
            "n_degenerate": self.n_degenerate,
            "ks_distance": self.ks_distance,
            "mean": self.mean,
            "variance": float(np.var(self.values, ddof=1)) if self.values.size > 1 else math.nan,
        }


def ks_distance(values, reference: dist.DistSpec) -> float:
    """One-sample Kolmogorov-Smirnov distance sup |F_n - F|."""
    v = np.sort(np.asarray(values, dtype=float).ravel())
    n = v.size
    if n == 0:
        raise InsufficientDataError("KS distance of an empty sample")
    c = np.asarray(dist.cdf(reference, v))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - c), np.max(c - (i - 1) / n)))


def histogram(values, bins: int = DEFAULT_BINS, range: tuple[float, float] | None = None) -> HistogramData:
    """Density-normalized equal-width histogram over [min, max] (or ``range``)."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise InsufficientDataError("histogram of an empty sample")
    if bins < 1:
        raise DomainError("bins must be >= 1")
    lo, hi = (float(v.min()), float(v.max())) if range is None else map(float, range)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    dens, edges = np.histogram(v, bins=bins, range=(lo, hi), density=True)
    return HistogramData(edges, dens)


def reference_for(kind: StatisticKind, sizes: Sequence[int]) -> dist.DistSpec:
    m, k = sum(sizes), len(sizes)
    if StatisticKind(kind) is StatisticKind.T_POOLED:
        return dist.DistSpec.student_t(m - 2)
    return dist.DistSpec.f(k - 1, m - k)


def finalize(
    blocks: list[tuple[np.ndarray, np.ndarray]],
    kind: StatisticKind,
    reference: dist.DistSpec,
    n_iter: int,
    bins: int,
) -> EmpiricalDistribution:
    """Assemble block outputs (statistics, degenerate mask) in iteration order."""
    stats = np.concatenate([b[0] for b in blocks])
    degenerate = np.concatenate([b[1] for b in blocks])
    values = stats[~degenerate]
    return EmpiricalDistribution(
        values=values,
        statistic_kind=StatisticKind(kind),
        reference=reference,
        ks_distance=ks_distance(values, reference) if values.size else math.nan,
        histogram=histogram(values, bins) if values.size else None,
        n_iter=n_iter,
        n_degenerate=int(degenerate.sum()),
    )


def _validate(groups: Sequence[GroupSample], kind: StatisticKind) -> None:
    if len(groups) < 2:
        raise InsufficientDataError("permutation needs at least 2 groups")
    if kind is StatisticKind.T_POOLED and len(groups) != 2:
        raise DomainError("t_pooled permutation needs exactly 2 groups")
    if min(g.n for g in groups) < 2:
        raise InsufficientDataError("each group needs at least 2 observations")


def shuffle_rows(pooled: np.ndarray, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` independent permutations of ``pooled``, one per row."""
    return rng.permuted(np.broadcast_to(pooled, (count, pooled.size)), axis=1)


def permuted_statistics(
    pooled: np.ndarray, sizes: Sequence[int], kind: StatisticKind, rng: np.random.Generator, count: int
) -> tuple[np.ndarray, np.ndarray]:
    """``count`` permutation statistics of ``pooled`` re-dealt into ``sizes``."""
    shuffled = shuffle_rows(pooled, rng, count)
    if kind is StatisticKind.T_POOLED:
        return pooled_t_batch(shuffled, sizes[0])
    return anova_f_batch(shuffled, sizes)


def permutation_null(
    groups: Sequence[GroupSample],
    statistic_kind: StatisticKind | str,
    n_iter: int,
    seed: RngSeed,
    bins: int = DEFAULT_BINS,
) -> EmpiricalDistribution:
    """Permutation distribution of the statistic under exchangeability.

    Iterations with zero within-group variance are dropped and counted in
    ``n_degenerate``.
    """
    kind = StatisticKind(statistic_kind)
    _validate(groups, kind)
    if n_iter < 1:
        raise DomainError("n_iter must be >= 1")
    sizes = [g.n for g in groups]
    pooled = np.concatenate([g.scores for g in groups])
    blocks = map_blocks(n_iter, seed, lambda rng, size: permuted_statistics(pooled, sizes, kind, rng, size))
    return finalize(blocks, kind, reference_for(kind, sizes), n_iter, bins)


def permutation_p_value(observed: float, dist_: EmpiricalDistribution | np.ndarray, tail: Tail | str) -> float:
    """Add-one Monte Carlo p-value (b + 1) / (N + 1)."""
    values = dist_.values if isinstance(dist_, EmpiricalDistribution) else np.asarray(dist_, dtype=float)
    n = values.size
    if n == 0:
        raise InsufficientDataError("permutation p-value from an empty distribution")
    tail = Tail(tail)
    # tolerance absorbs rounding when a permutation reproduces the observed split
    tol = 1e-12 * max(1.0, abs(observed)) if math.isfinite(observed) else 0.0
    if tail is Tail.TWO_SIDED:
        b = np.count_nonzero(np.abs(values) >= abs(observed) - tol)
    elif tail is Tail.RIGHT:
        b = np.count_nonzero(values >= observed - tol)
    else:
        b = np.count_nonzero(values <= observed + tol)
    return (int(b) + 1) / (n + 1)
