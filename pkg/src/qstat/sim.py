"""Monte Carlo experiments.

* ``clt_experiment``: sampling distribution of the ANOVA F statistic when
  groups come from non-normal parents.
* ``resample_experiment``: permutation null distributions on observed data.
* ``two_step_experiment``: Type-I rate of "normality test, then choose a
  test" against the direct pooled t test.
* ``generate_treatment_groups``: synthetic opinion scores with systematic
  or heterogeneous treatment effects.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import dist
from .descr import GroupSample
from .errors import DomainError
from .resample import (
    DEFAULT_BINS,
    EmpiricalDistribution,
    StatisticKind,
    finalize,
    permutation_null,
    permutation_p_value,
    permuted_statistics,
)
from .rng import RngSeed, map_blocks
from .stattests import Tail, anova_f_batch, jb_batch, pooled_t_batch, t_p_value


@dataclass(frozen=True)
class CltExperimentConfig:
    dist: dist.DistSpec
    k: int = 5
    n: int = 25
    n_iter: int = 100_000
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))

    def __post_init__(self):
        if self.k < 2 or self.n < 2 or self.n_iter < 1:
            raise DomainError("need k >= 2, n >= 2 and n_iter >= 1")
        if self.dist.kind not in dist.SAMPLEABLE:
            raise DomainError(f"cannot sample from {self.dist.kind.value}")

    def to_dict(self) -> dict:
        return {
            "dist": self.dist.to_dict(),
            "k": self.k,
            "n": self.n,
            "n_iter": self.n_iter,
            "seed": self.seed.to_dict(),
        }


def clt_experiment(cfg: CltExperimentConfig, bins: int = DEFAULT_BINS) -> EmpiricalDistribution:
    """Draw k groups of n per iteration from ``cfg.dist``; collect ANOVA F."""
    sizes = [cfg.n] * cfg.k

    def block(rng, size):
        x = dist.draw(cfg.dist, rng, (size, cfg.k * cfg.n))
        return anova_f_batch(x, sizes)

    blocks = map_blocks(cfg.n_iter, cfg.seed, block)
    ref = dist.DistSpec.f(cfg.k - 1, cfg.k * cfg.n - cfg.k)
    return finalize(blocks, StatisticKind.F_ANOVA, ref, cfg.n_iter, bins)


def resample_experiment(
    groups: Sequence[GroupSample],
    statistic_kind: StatisticKind | str,
    n_iter: int,
    seed: RngSeed,
    bins: int = DEFAULT_BINS,
) -> EmpiricalDistribution:
    return permutation_null(groups, statistic_kind, n_iter, seed, bins)


# Two-step procedure ---------------------------------------------------------

_JB_CALIBRATION_DRAWS = 10_000
_JB_CALIBRATION_SEED = RngSeed(0x4A42, 0)


@functools.lru_cache(maxsize=64)
def jb_critical_value(n: int, alpha: float, draws: int = _JB_CALIBRATION_DRAWS) -> float:
    """Upper-alpha point of the JB statistic for normal samples of size n (simulated)."""
    rng = _JB_CALIBRATION_SEED.generator(n)
    jb, _ = jb_batch(rng.standard_normal((draws, n)))
    return float(np.quantile(jb, 1.0 - alpha))


@dataclass(frozen=True)
class TwoStepResult:
    rate_direct: float
    rate_two_step: float
    rate_normality_reject: float
    n_iter: int
    jb_critical_value: float
    # split of the two-step rejection into its two exclusive parts
    rate_reject_parametric_branch: float
    rate_reject_permutation_branch: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def two_step_experiment(
    n: int,
    dist_spec: dist.DistSpec,
    alpha: float,
    n_iter: int,
    seed: RngSeed,
    n_perm: int = 999,
) -> TwoStepResult:
    """Compare direct pooled t with "JB check on both groups, then t or permutation".

    Both groups come from ``dist_spec`` so every rejection is a Type-I error.
    """
    if n < 4:
        raise DomainError("n must be >= 4 for the JB check")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if n_iter < 1 or n_perm < 1:
        raise DomainError("n_iter and n_perm must be >= 1")
    if dist_spec.kind not in dist.SAMPLEABLE:
        raise DomainError(f"cannot sample from {dist_spec.kind.value}")
    crit = jb_critical_value(n, alpha)
    df = 2 * n - 2

    def block(rng, size):
        x = dist.draw(dist_spec, rng, (size, 2 * n))
        t, _ = pooled_t_batch(x, n)
        with np.errstate(invalid="ignore"):
            p = np.asarray(t_p_value(np.nan_to_num(t, nan=0.0), df, Tail.TWO_SIDED))
        reject_direct = (p <= alpha) & ~np.isnan(t)
        jb1, deg1 = jb_batch(x[:, :n])
        jb2, deg2 = jb_batch(x[:, n:])
        normal = ~deg1 & ~deg2 & (jb1 <= crit) & (jb2 <= crit)
        reject_perm = np.zeros(size, dtype=bool)
        for i in np.flatnonzero(~normal):
            if np.isnan(t[i]):
                continue
            vals, deg = permuted_statistics(x[i], [n, n], StatisticKind.T_POOLED, rng, n_perm)
            vals = vals[~deg]
            if vals.size:
                reject_perm[i] = permutation_p_value(float(t[i]), vals, Tail.TWO_SIDED) <= alpha
        return reject_direct, normal, reject_perm

    blocks = map_blocks(n_iter, seed, block)
    reject_direct = np.concatenate([b[0] for b in blocks])
    normal = np.concatenate([b[1] for b in blocks])
    reject_perm = np.concatenate([b[2] for b in blocks])
    param_count = np.count_nonzero(reject_direct & normal)
    perm_count = np.count_nonzero(reject_perm & ~normal)
    return TwoStepResult(
        rate_direct=np.count_nonzero(reject_direct) / n_iter,
        rate_two_step=(param_count + perm_count) / n_iter,
        rate_normality_reject=np.count_nonzero(~normal) / n_iter,
        n_iter=n_iter,
        jb_critical_value=crit,
        rate_reject_parametric_branch=param_count / n_iter,
        rate_reject_permutation_branch=perm_count / n_iter,
    )


# Treatment-effect generator -------------------------------------------------


class EffectMode(str, Enum):
    SYSTEMATIC = "systematic"
    HETEROGENEOUS = "heterogeneous"


@dataclass(frozen=True)
class TreatmentConfig:
    mu_org: float
    effects: tuple[float, ...]
    noise_sigma: float
    mode: EffectMode = EffectMode.SYSTEMATIC
    hetero_sigma: float = 0.0
    n_subjects: int = 24
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(float(e) for e in self.effects))
        object.__setattr__(self, "mode", EffectMode(self.mode))
        if not self.effects:
            raise DomainError("need at least one condition effect")
        if not self.noise_sigma > 0:
            raise DomainError("noise_sigma must be > 0")
        if self.hetero_sigma < 0:
            raise DomainError("hetero_sigma must be >= 0")
        if self.n_subjects < 1:
            raise DomainError("n_subjects must be >= 1")

    def condition_ids(self) -> list[str]:
        return [f"c{j}" for j in range(len(self.effects))]

    def subject_ids(self) -> list[str]:
        width = len(str(self.n_subjects))
        return [f"s{i + 1:0{width}d}" for i in range(self.n_subjects)]

    def to_dict(self) -> dict:
        return {
            "mu_org": self.mu_org,
            "effects": list(self.effects),
            "noise_sigma": self.noise_sigma,
            "mode": self.mode.value,
            "hetero_sigma": self.hetero_sigma,
            "n_subjects": self.n_subjects,
            "seed": self.seed.to_dict(),
        }


def generate_treatment_groups(cfg: TreatmentConfig) -> list[GroupSample]:
    """Scores mu_org + E_c + eps_i, with the subject error eps_i shared by all conditions.

    In heterogeneous mode every (subject, condition) score also gets an
    independent N(0, hetero_sigma^2) perturbation of the effect.
    """
    rng = cfg.seed.generator()
    eps = rng.normal(0.0, cfg.noise_sigma, cfg.n_subjects)
    hetero = None
    if cfg.mode is EffectMode.HETEROGENEOUS:
        hetero = rng.normal(0.0, 1.0, (len(cfg.effects), cfg.n_subjects)) * cfg.hetero_sigma
    groups = []
    for j, (cid, effect) in enumerate(zip(cfg.condition_ids(), cfg.effects)):
        scores = cfg.mu_org + effect + eps
        if hetero is not None:
            scores = scores + hetero[j]
        groups.append(GroupSample(cid, scores))
    return groups


def treatment_records(cfg: TreatmentConfig) -> list[tuple[str, str, float]]:
    """Long-format (subject, condition, score) rows for the generated groups."""
    rows = []
    subjects = cfg.subject_ids()
    for g in generate_treatment_groups(cfg):
        rows.extend((s, g.id, float(v)) for s, v in zip(subjects, g.scores))
    return rows


def f_mean(d1: float, d2: float) -> float:
    """Mean of F(d1, d2), d2 > 2."""
    if d2 <= 2:
        return math.inf
    return d2 / (d2 - 2)
