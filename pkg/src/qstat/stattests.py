"""Parametric test statistics: pooled and Welch t, one-way ANOVA.

Also houses the c_pooled diagnostic for unequal variances and the
Jarque-Bera statistic, plus batched (row-per-iteration) versions of the
statistics used by the Monte Carlo engines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import dist
from .descr import GroupSample, grand_mean, moments, pooled_variance
from .errors import DegenerateDataError, DomainError, InsufficientDataError


class Method(str, Enum):
    T_POOLED = "t_pooled"
    T_WELCH = "t_welch"
    ANOVA = "anova_oneway"


class Tail(str, Enum):
    TWO_SIDED = "two_sided"
    LEFT = "left"
    RIGHT = "right"


@dataclass
class TestResult:
    method: Method
    statistic: float
    df: float | tuple[float, float]
    p_value: float
    tail: Tail = Tail.TWO_SIDED
    extras: dict[str, Any] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    @property
    def infinite(self) -> bool:
        """True when a zero within-group variance made the statistic infinite."""
        return math.isinf(self.statistic)

    def to_dict(self) -> dict:
        df = list(self.df) if isinstance(self.df, tuple) else self.df
        return {
            "method": Method(self.method).value,
            "statistic": self.statistic,
            "df": df,
            "p_value": self.p_value,
            "tail": Tail(self.tail).value,
            "infinite_statistic": self.infinite,
            "extras": self.extras,
        }


def t_p_value(t, df: float, tail: Tail | str = Tail.TWO_SIDED):
    """p-value of a t statistic (scalar or array)."""
    tail = Tail(tail)
    ref = dist.DistSpec.student_t(df)
    if tail is Tail.TWO_SIDED:
        p = np.minimum(1.0, 2.0 * np.asarray(dist.sf(ref, np.abs(t))))
        return float(p) if np.ndim(t) == 0 else p
    if tail is Tail.RIGHT:
        return dist.sf(ref, t)
    return dist.cdf(ref, t)


def f_p_value(f, df1: float, df2: float):
    return dist.sf(dist.DistSpec.f(df1, df2), f)


def _check_n(*ns: int) -> None:
    if min(ns) < 2:
        raise InsufficientDataError("each group needs at least 2 observations")


def t_test_pooled_summary(
    mean1: float, var1: float, n1: int, mean2: float, var2: float, n2: int, tail: Tail | str = Tail.TWO_SIDED
) -> TestResult:
    """Pooled-variance two-sample t test from group summaries."""
    _check_n(n1, n2)
    sp2 = pooled_variance(var1, n1, var2, n2)
    df = n1 + n2 - 2
    diff = mean1 - mean2
    if sp2 == 0.0:
        if diff == 0.0:
            raise DegenerateDataError("both groups constant and equal: t statistic is 0/0")
        t = math.copysign(math.inf, diff)
    else:
        t = diff / math.sqrt(sp2 * (1.0 / n1 + 1.0 / n2))
    return TestResult(
        method=Method.T_POOLED,
        statistic=t,
        df=df,
        p_value=float(t_p_value(t, df, tail)),
        tail=Tail(tail),
        extras={"pooled_variance": sp2, "mean_difference": diff, "means": [mean1, mean2], "ns": [n1, n2]},
    )


def t_test_pooled(g1: GroupSample, g2: GroupSample, tail: Tail | str = Tail.TWO_SIDED) -> TestResult:
    _check_n(g1.n, g2.n)
    s1, s2 = moments(g1), moments(g2)
    return t_test_pooled_summary(s1.mean, s1.variance, s1.n, s2.mean, s2.variance, s2.n, tail)


def t_test_welch_summary(
    mean1: float, var1: float, n1: int, mean2: float, var2: float, n2: int, tail: Tail | str = Tail.TWO_SIDED
) -> TestResult:
    """Unpooled t test; Satterthwaite df from the sample variances, not rounded."""
    _check_n(n1, n2)
    if var1 < 0 or var2 < 0:
        raise DomainError("variances must be non-negative")
    a, b = var1 / n1, var2 / n2
    se2 = a + b
    if se2 == 0.0:
        raise DegenerateDataError("both groups constant: Welch t undefined")
    df = se2 * se2 / (a * a / (n1 - 1) + b * b / (n2 - 1))
    t = (mean1 - mean2) / math.sqrt(se2)
    return TestResult(
        method=Method.T_WELCH,
        statistic=t,
        df=df,
        p_value=float(t_p_value(t, df, tail)),
        tail=Tail(tail),
        extras={"standard_error": math.sqrt(se2), "means": [mean1, mean2], "ns": [n1, n2]},
    )


def t_test_welch(g1: GroupSample, g2: GroupSample, tail: Tail | str = Tail.TWO_SIDED) -> TestResult:
    _check_n(g1.n, g2.n)
    s1, s2 = moments(g1), moments(g2)
    return t_test_welch_summary(s1.mean, s1.variance, s1.n, s2.mean, s2.variance, s2.n, tail)


def _anova_result(ss_b: float, ss_w: float, k: int, m: int, means: list[float], ns: list[int]) -> TestResult:
    df_b, df_w = k - 1, m - k
    if ss_w == 0.0:
        if ss_b == 0.0:
            raise DegenerateDataError("all groups constant and equal: F statistic is 0/0")
        f = math.inf
    else:
        f = (ss_b / df_b) / (ss_w / df_w)
    return TestResult(
        method=Method.ANOVA,
        statistic=f,
        df=(df_b, df_w),
        p_value=float(f_p_value(f, df_b, df_w)),
        tail=Tail.RIGHT,
        extras={
            "ss_between": ss_b,
            "ss_within": ss_w,
            "ms_between": ss_b / df_b,
            "ms_within": ss_w / df_w,
            "group_means": means,
            "group_sizes": ns,
        },
    )


def _check_groups(ns: Sequence[int]) -> None:
    if len(ns) < 2:
        raise InsufficientDataError("ANOVA needs at least 2 groups")
    _check_n(*ns)


def anova_oneway(groups: Sequence[GroupSample]) -> TestResult:
    """One-way ANOVA from raw scores; SS_W from raw deviations."""
    ns = [g.n for g in groups]
    _check_groups(ns)
    xbar = grand_mean(groups)
    means = [float(np.mean(g.scores)) for g in groups]
    ss_b = float(sum(n * (mu - xbar) ** 2 for n, mu in zip(ns, means)))
    ss_w = float(sum(np.sum((g.scores - mu) ** 2) for g, mu in zip(groups, means)))
    return _anova_result(ss_b, ss_w, len(groups), sum(ns), means, ns)


def anova_oneway_summary(means: Sequence[float], variances: Sequence[float], ns: Sequence[int]) -> TestResult:
    if not len(means) == len(variances) == len(ns):
        raise DomainError("means, variances and ns must have equal length")
    ns = [int(n) for n in ns]
    _check_groups(ns)
    if min(variances) < 0:
        raise DomainError("variances must be non-negative")
    m = sum(ns)
    xbar = sum(n * mu for n, mu in zip(ns, means)) / m
    ss_b = float(sum(n * (mu - xbar) ** 2 for n, mu in zip(ns, means)))
    ss_w = float(sum((n - 1) * v for n, v in zip(ns, variances)))
    return _anova_result(ss_b, ss_w, len(ns), m, [float(x) for x in means], ns)


def c_pooled_factor(n1: int, n2: int, var1: float, var2: float) -> float:
    """Scale of the pooled t statistic relative to t(n1 + n2 - 2).

    Equals 1 for equal population variances or for a balanced design.
    """
    _check_n(n1, n2)
    if var1 <= 0 or var2 <= 0:
        raise DomainError("population variances must be positive")
    num = (n1 + n2 - 2) * (var1 / n1 + var2 / n2)
    den = (1.0 / n1 + 1.0 / n2) * ((n1 - 1) * var1 + (n2 - 1) * var2)
    return math.sqrt(num / den)


def jb_statistic(g: GroupSample | Sequence[float]) -> float:
    """Jarque-Bera statistic n/6 (S^2 + (K - 3)^2 / 4), biased moments."""
    x = g.scores if isinstance(g, GroupSample) else np.asarray(g, dtype=float)
    if x.size < 4:
        raise InsufficientDataError("JB statistic needs n >= 4")
    jb, degenerate = jb_batch(x[None, :])
    if degenerate[0]:
        raise DegenerateDataError("JB statistic undefined for zero variance")
    return float(jb[0])


# Batched statistics: one row per Monte Carlo iteration.


def jb_batch(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = x.shape[-1]
    d = x - x.mean(axis=-1, keepdims=True)
    scale = np.abs(d).max(axis=-1, keepdims=True)
    # shape ratios are scale-free; rescale to dodge underflow in m2**3
    d = d / np.where(scale == 0.0, 1.0, scale)
    d2 = d * d
    m2 = d2.mean(axis=-1)
    m3 = (d2 * d).mean(axis=-1)
    m4 = (d2 * d2).mean(axis=-1)
    degenerate = m2 == 0.0
    safe = np.where(degenerate, 1.0, m2)
    s2 = m3 * m3 / safe**3
    k = m4 / (safe * safe)
    jb = n / 6.0 * (s2 + 0.25 * (k - 3.0) ** 2)
    return np.where(degenerate, np.nan, jb), degenerate


def pooled_t_batch(x: np.ndarray, n1: int) -> tuple[np.ndarray, np.ndarray]:
    """Pooled t for rows of ``x`` split as x[:, :n1] vs x[:, n1:].

    Returns (statistics, degenerate) where degenerate marks rows with zero
    pooled variance; their statistic is +-inf, or nan for 0/0.
    """
    a, b = x[:, :n1], x[:, n1:]
    n2 = b.shape[1]
    ma, mb = a.mean(axis=1), b.mean(axis=1)
    ssa = ((a - ma[:, None]) ** 2).sum(axis=1)
    ssb = ((b - mb[:, None]) ** 2).sum(axis=1)
    sp2 = (ssa + ssb) / (n1 + n2 - 2)
    diff = ma - mb
    degenerate = sp2 == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = diff / np.sqrt(sp2 * (1.0 / n1 + 1.0 / n2))
    return t, degenerate


def anova_f_batch(x: np.ndarray, sizes: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """ANOVA F for rows of ``x`` whose columns are consecutive groups of ``sizes``."""
    sizes = np.asarray(sizes)
    k = sizes.size
    m = int(sizes.sum())
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    means = np.add.reduceat(x, starts, axis=1) / sizes
    grand = x.mean(axis=1)
    ss_b = ((means - grand[:, None]) ** 2 * sizes).sum(axis=1)
    dev = x - np.repeat(means, sizes, axis=1)
    ss_w = (dev * dev).sum(axis=1)
    degenerate = ss_w == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        f = (ss_b / (k - 1)) / (ss_w / (m - k))
    return f, degenerate
