"""Recommended analysis flow for comparing condition means.

No normality test is run anywhere in this module. The flow is:

1. If the caller says the mean is not an adequate summary, use a
   permutation test (t for two groups, F otherwise).
2. Otherwise apply the max/min group-variance rule and the balanced-design
   check. Heterogeneous variances in a balanced design only warn. In an
   unbalanced design both the parametric and a permutation result are
   reported and the report is flagged for review.
3. Run the pooled t test (k = 2) or one-way ANOVA (k > 2).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .descr import GroupSample, SummaryStats, moments
from .errors import DegenerateDataError, DomainError, InsufficientDataError
from .resample import StatisticKind, permutation_null, permutation_p_value
from .rng import RngSeed
from .stattests import Tail, TestResult, anova_oneway, t_test_pooled

SCHEMA_VERSION = "1.0"
DEFAULT_VARIANCE_RATIO_THRESHOLD = 0.25


class ChosenMethod(str, Enum):
    T_POOLED = "t_pooled"
    ANOVA = "anova_oneway"
    PERMUTATION = "permutation"


@dataclass(frozen=True)
class WorkflowConfig:
    alpha: float = 0.05
    variance_ratio_threshold: float = DEFAULT_VARIANCE_RATIO_THRESHOLD
    mean_adequate: bool = True
    permutation_iters: int = 100_000
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        if not 0.0 < self.variance_ratio_threshold < 1.0:
            raise DomainError("variance ratio threshold must lie in (0, 1)")
        if self.permutation_iters < 1:
            raise DomainError("permutation_iters must be >= 1")


@dataclass(frozen=True)
class VarianceCheck:
    ratio: float
    heterogeneous: bool
    offending_groups: list[str]

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "heterogeneous": self.heterogeneous, "offending_groups": self.offending_groups}


@dataclass(frozen=True)
class PermutationOutcome:
    statistic_kind: StatisticKind
    observed: float
    p_value: float
    tail: Tail
    n_iter: int
    n_degenerate: int
    ks_distance: float

    def to_dict(self) -> dict:
        return {
            "statistic_kind": self.statistic_kind.value,
            "observed": self.observed,
            "p_value": self.p_value,
            "tail": self.tail.value,
            "n_iter": self.n_iter,
            "n_degenerate": self.n_degenerate,
            "ks_distance_to_reference": self.ks_distance,
        }


@dataclass
class DecisionReport:
    groups: list[str]
    groups_summary: list[SummaryStats]
    variance_ratio: float
    heterogeneous_flag: bool
    balanced_flag: bool
    mean_adequate_flag: bool
    chosen_method: ChosenMethod
    result: TestResult | None
    permutation: PermutationOutcome | None
    review_required: bool
    warnings: list[str]
    rationale: list[str]
    alpha: float
    seed: RngSeed

    @property
    def p_value(self) -> float:
        if self.chosen_method is ChosenMethod.PERMUTATION:
            return self.permutation.p_value
        return self.result.p_value

    @property
    def significant(self) -> bool:
        return self.p_value <= self.alpha

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed.to_dict(),
            "alpha": self.alpha,
            "chosen_method": self.chosen_method.value,
            "p_value": self.p_value,
            "significant": self.significant,
            "variance_ratio": self.variance_ratio,
            "heterogeneous_flag": self.heterogeneous_flag,
            "balanced_flag": self.balanced_flag,
            "mean_adequate_flag": self.mean_adequate_flag,
            "review_required": self.review_required,
            "groups_summary": [{"condition": gid, **s.to_dict()} for gid, s in zip(self.groups, self.groups_summary)],
            "result": self.result.to_dict() if self.result else None,
            "permutation": self.permutation.to_dict() if self.permutation else None,
            "warnings": self.warnings,
            "rationale": self.rationale,
        }


def variance_homogeneity_check(
    groups: Sequence[GroupSample], threshold: float = DEFAULT_VARIANCE_RATIO_THRESHOLD
) -> VarianceCheck:
    """min/max group-variance ratio; flags heterogeneity below ``threshold``.

    When flagged, ``offending_groups`` names the group(s) whose variance is
    furthest (as a factor) from the median group variance.
    """
    if len(groups) < 2:
        raise InsufficientDataError("variance check needs at least 2 groups")
    variances = [moments(g).variance for g in groups]
    vmax = max(variances)
    if vmax == 0.0:
        raise DegenerateDataError("all groups are constant; variance ratio undefined")
    ratio = min(variances) / vmax
    heterogeneous = ratio < threshold
    offending: list[str] = []
    if heterogeneous:
        med = statistics.median(variances)
        factors = [max(v / med, med / v) if v > 0 and med > 0 else float("inf") for v in variances]
        worst = max(factors)
        offending = [g.id for g, f in zip(groups, factors) if f == worst]
    return VarianceCheck(ratio, heterogeneous, offending)


def balanced_check(groups: Sequence[GroupSample]) -> bool:
    return len({g.n for g in groups}) == 1


def _permutation(groups, cfg: WorkflowConfig) -> PermutationOutcome:
    if len(groups) == 2:
        kind, tail = StatisticKind.T_POOLED, Tail.TWO_SIDED
        observed = t_test_pooled(groups[0], groups[1]).statistic
    else:
        kind, tail = StatisticKind.F_ANOVA, Tail.RIGHT
        observed = anova_oneway(groups).statistic
    null = permutation_null(groups, kind, cfg.permutation_iters, cfg.seed)
    return PermutationOutcome(
        statistic_kind=kind,
        observed=observed,
        p_value=permutation_p_value(observed, null, tail),
        tail=tail,
        n_iter=null.n_iter,
        n_degenerate=null.n_degenerate,
        ks_distance=null.ks_distance,
    )


def _parametric(groups) -> TestResult:
    if len(groups) == 2:
        return t_test_pooled(groups[0], groups[1])
    return anova_oneway(groups)


def recommend(groups: Sequence[GroupSample], cfg: WorkflowConfig | None = None) -> DecisionReport:
    cfg = cfg or WorkflowConfig()
    if len(groups) < 2:
        raise InsufficientDataError("need at least 2 groups to compare")
    summaries = [moments(g) for g in groups]
    check = variance_homogeneity_check(groups, cfg.variance_ratio_threshold)
    balanced = balanced_check(groups)
    parametric_method = ChosenMethod.T_POOLED if len(groups) == 2 else ChosenMethod.ANOVA
    warnings: list[str] = []
    rationale = [
        "Decision path reconstructed from the recommended flow: no normality test is applied.",
        f"Variance ratio min/max = {check.ratio:.4f} (threshold {cfg.variance_ratio_threshold}).",
        f"Design is {'balanced' if balanced else 'unbalanced'}: sizes {[g.n for g in groups]}.",
    ]
    result = None
    perm = None
    review = False

    if not cfg.mean_adequate:
        chosen = ChosenMethod.PERMUTATION
        rationale.append("Mean declared not adequate as a summary: permutation test on the requested statistic.")
        perm = _permutation(groups, cfg)
    else:
        chosen = parametric_method
        if check.heterogeneous and balanced:
            warnings.append(
                f"Group variances differ (ratio {check.ratio:.3f}; furthest: {', '.join(check.offending_groups)}). "
                "Balanced design: pooled tests remain valid, but consider why these conditions vary more."
            )
            rationale.append("Heterogeneous variances with equal group sizes: pooled test kept.")
        elif check.heterogeneous:
            review = True
            warnings.append(
                f"Group variances differ strongly (ratio {check.ratio:.3f}; furthest: "
                f"{', '.join(check.offending_groups)}) and group sizes are unequal. The pooled result is shown "
                "next to a permutation result; check how these conditions were rated before comparing means."
            )
            rationale.append("Heterogeneous variances and unbalanced design: parametric and permutation results both reported.")
            perm = _permutation(groups, cfg)
        else:
            rationale.append("Variances similar: pooled test applied directly.")
        result = _parametric(groups)
        rationale.append(f"Applied {parametric_method.value}.")

    return DecisionReport(
        groups=[g.id for g in groups],
        groups_summary=summaries,
        variance_ratio=check.ratio,
        heterogeneous_flag=check.heterogeneous,
        balanced_flag=balanced,
        mean_adequate_flag=cfg.mean_adequate,
        chosen_method=chosen,
        result=result,
        permutation=perm,
        review_required=review,
        warnings=warnings,
        rationale=rationale,
        alpha=cfg.alpha,
        seed=cfg.seed,
    )
