"""qstat: statistical testing for subjective multimedia-quality scores."""

__version__ = "0.1.0"

from .descr import GroupSample, SummaryStats, grand_mean, moments, pdu, pooled_variance
from .dist import DistSpec
from .rng import RngSeed
from .stattests import (
    TestResult,
    anova_oneway,
    anova_oneway_summary,
    c_pooled_factor,
    jb_statistic,
    t_test_pooled,
    t_test_pooled_summary,
    t_test_welch,
)

__all__ = [
    "DistSpec",
    "GroupSample",
    "RngSeed",
    "SummaryStats",
    "TestResult",
    "anova_oneway",
    "anova_oneway_summary",
    "c_pooled_factor",
    "grand_mean",
    "jb_statistic",
    "moments",
    "pdu",
    "pooled_variance",
    "t_test_pooled",
    "t_test_pooled_summary",
    "t_test_welch",
]
