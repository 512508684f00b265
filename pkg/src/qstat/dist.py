"""Probability distributions used as references and as data generators.

Densities, CDFs and quantiles for the normal, Student-t, F and
chi-squared reference laws, plus the uniform, exponential and beta laws
used to simulate opinion scores. CDFs of t and F go through the
regularized incomplete beta function in :mod:`qstat.special`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import ConvergenceError, DomainError
from .rng import RngSeed
from .special import _reg_inc_beta, log_beta, log_gamma, reg_lower_inc_gamma


class Kind(str, Enum):
    NORMAL = "normal"
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"
    BETA = "beta"
    STUDENT_T = "student_t"
    F = "f"
    CHI_SQUARED = "chi_squared"


_PARAMS = {
    Kind.NORMAL: ("mu", "sigma"),
    Kind.UNIFORM: ("a", "b"),
    Kind.EXPONENTIAL: ("lambda",),
    Kind.BETA: ("a", "b"),
    Kind.STUDENT_T: ("df",),
    Kind.F: ("df1", "df2"),
    Kind.CHI_SQUARED: ("df",),
}

SAMPLEABLE = (Kind.NORMAL, Kind.UNIFORM, Kind.EXPONENTIAL, Kind.BETA)


@dataclass(frozen=True)
class DistSpec:
    kind: Kind
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError:
            raise DomainError(f"unknown distribution kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        expected = _PARAMS[kind]
        if set(self.params) != set(expected):
            raise DomainError(f"{kind.value} needs parameters {expected}, got {tuple(self.params)}")
        params = {k: float(self.params[k]) for k in expected}
        if not all(math.isfinite(v) for v in params.values()):
            raise DomainError("distribution parameters must be finite")
        object.__setattr__(self, "params", params)
        p = params
        if kind is Kind.NORMAL and p["sigma"] <= 0:
            raise DomainError("normal sigma must be > 0")
        if kind is Kind.UNIFORM and not p["a"] < p["b"]:
            raise DomainError("uniform needs a < b")
        if kind is Kind.EXPONENTIAL and p["lambda"] <= 0:
            raise DomainError("exponential lambda must be > 0")
        if kind is Kind.BETA and (p["a"] <= 0 or p["b"] <= 0):
            raise DomainError("beta needs a > 0 and b > 0")
        if kind in (Kind.STUDENT_T, Kind.F, Kind.CHI_SQUARED) and min(p.values()) < 1:
            raise DomainError("degrees of freedom must be >= 1")

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items()))))

    # constructors
    @classmethod
    def normal(cls, mu: float = 0.0, sigma: float = 1.0) -> "DistSpec":
        return cls(Kind.NORMAL, {"mu": mu, "sigma": sigma})

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> "DistSpec":
        return cls(Kind.UNIFORM, {"a": a, "b": b})

    @classmethod
    def exponential(cls, lam: float = 1.0) -> "DistSpec":
        return cls(Kind.EXPONENTIAL, {"lambda": lam})

    @classmethod
    def beta(cls, a: float, b: float) -> "DistSpec":
        return cls(Kind.BETA, {"a": a, "b": b})

    @classmethod
    def student_t(cls, df: float) -> "DistSpec":
        return cls(Kind.STUDENT_T, {"df": df})

    @classmethod
    def f(cls, df1: float, df2: float) -> "DistSpec":
        return cls(Kind.F, {"df1": df1, "df2": df2})

    @classmethod
    def chi_squared(cls, df: float) -> "DistSpec":
        return cls(Kind.CHI_SQUARED, {"df": df})

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "params": dict(self.params)}

    def label(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.kind.value}({args})"


# Parent laws for the F sampling-distribution experiment, keyed by CLI name.
REFERENCE_DISTS = {
    "beta": DistSpec.beta(0.5, 0.5),
    "exponential": DistSpec.exponential(0.5),
    "normal": DistSpec.normal(0.0, 1.0),
    "uniform": DistSpec.uniform(0.0, 1.0),
}

# Non-excess kurtosis of each REFERENCE_DISTS entry.
REFERENCE_KURTOSIS = {"beta": 1.5, "exponential": 9.0, "normal": 3.0, "uniform": 1.8}


_erfc = np.frompyfunc(math.erfc, 1, 1)


def _std_normal_cdf(z: np.ndarray) -> np.ndarray:
    return 0.5 * _erfc(-z / math.sqrt(2.0)).astype(float)


def _t_cdf(t: np.ndarray, df: float) -> np.ndarray:
    finite = np.isfinite(t)
    t2 = np.where(finite, t * t, 1.0)
    # tail mass 0.5 * I_{df/(df+t^2)}(df/2, 1/2)
    tail = 0.5 * _reg_inc_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2))
    tail = np.where(finite, tail, 0.0)
    return np.where(t > 0, 1.0 - tail, tail)


def _f_cdf(x: np.ndarray, d1: float, d2: float) -> np.ndarray:
    xp = np.where((x > 0) & np.isfinite(x), x, 1.0)
    denom = d1 * xp + d2
    out = _reg_inc_beta(0.5 * d1, 0.5 * d2, d1 * xp / denom, d2 / denom)
    out = np.where(np.isposinf(x), 1.0, out)
    return np.where(x > 0, out, 0.0)


def _prep(x):
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return scalar, arr


def _finish(out: np.ndarray, scalar: bool, shape):
    return float(out[0]) if scalar else out.reshape(shape)


def cdf(spec: DistSpec, x):
    """Cumulative distribution function P(X <= x)."""
    scalar, xs = _prep(x)
    shape = np.shape(x)
    p = spec.params
    k = spec.kind
    if k is Kind.NORMAL:
        out = _std_normal_cdf((xs - p["mu"]) / p["sigma"])
    elif k is Kind.UNIFORM:
        out = np.clip((xs - p["a"]) / (p["b"] - p["a"]), 0.0, 1.0)
    elif k is Kind.EXPONENTIAL:
        out = np.where(xs > 0, -np.expm1(-p["lambda"] * np.maximum(xs, 0.0)), 0.0)
    elif k is Kind.BETA:
        xc = np.clip(xs, 0.0, 1.0)
        out = _reg_inc_beta(p["a"], p["b"], xc, 1.0 - xc)
    elif k is Kind.STUDENT_T:
        out = _t_cdf(xs, p["df"])
    elif k is Kind.F:
        out = _f_cdf(xs, p["df1"], p["df2"])
    else:
        out = np.asarray(reg_lower_inc_gamma(0.5 * p["df"], 0.5 * np.maximum(xs, 0.0)))
    return _finish(np.asarray(out, dtype=float), scalar, shape)


def sf(spec: DistSpec, x):
    """Survival function P(X > x), computed without 1 - cdf cancellation for t and F."""
    scalar, xs = _prep(x)
    shape = np.shape(x)
    p = spec.params
    if spec.kind is Kind.STUDENT_T:
        out = _t_cdf(-xs, p["df"])
    elif spec.kind is Kind.F:
        d1, d2 = p["df1"], p["df2"]
        xp = np.where((xs > 0) & np.isfinite(xs), xs, 1.0)
        denom = d1 * xp + d2
        out = _reg_inc_beta(0.5 * d2, 0.5 * d1, d2 / denom, d1 * xp / denom)
        out = np.where(np.isposinf(xs), 0.0, out)
        out = np.where(xs > 0, out, 1.0)
    elif spec.kind is Kind.NORMAL:
        out = _std_normal_cdf(-(xs - p["mu"]) / p["sigma"])
    else:
        out = 1.0 - np.asarray(cdf(spec, xs))
    return _finish(np.asarray(out, dtype=float), scalar, shape)


def pdf(spec: DistSpec, x):
    """Probability density function."""
    scalar, xs = _prep(x)
    shape = np.shape(x)
    p = spec.params
    k = spec.kind
    with np.errstate(divide="ignore", invalid="ignore"):
        if k is Kind.NORMAL:
            z = (xs - p["mu"]) / p["sigma"]
            out = np.exp(-0.5 * z * z) / (p["sigma"] * math.sqrt(2.0 * math.pi))
        elif k is Kind.UNIFORM:
            out = np.where((xs >= p["a"]) & (xs <= p["b"]), 1.0 / (p["b"] - p["a"]), 0.0)
        elif k is Kind.EXPONENTIAL:
            lam = p["lambda"]
            out = np.where(xs >= 0, lam * np.exp(-lam * np.maximum(xs, 0.0)), 0.0)
        elif k is Kind.BETA:
            a, b = p["a"], p["b"]
            inside = (xs > 0) & (xs < 1)
            xc = np.where(inside, xs, 0.5)
            dens = np.exp((a - 1) * np.log(xc) + (b - 1) * np.log1p(-xc) - log_beta(a, b))
            out = np.where(inside, dens, 0.0)
            # boundary values where the density is finite
            out = np.where((xs == 0) & (a == 1), b, out)
            out = np.where((xs == 1) & (b == 1), a, out)
            out = np.where(((xs == 0) & (a < 1)) | ((xs == 1) & (b < 1)), np.inf, out)
        elif k is Kind.STUDENT_T:
            df = p["df"]
            logc = log_gamma(0.5 * (df + 1)) - log_gamma(0.5 * df) - 0.5 * math.log(df * math.pi)
            out = np.exp(logc - 0.5 * (df + 1) * np.log1p(xs * xs / df))
        elif k is Kind.F:
            d1, d2 = p["df1"], p["df2"]
            pos = xs > 0
            xc = np.where(pos, xs, 1.0)
            logd = (
                0.5 * d1 * math.log(d1)
                + 0.5 * d2 * math.log(d2)
                + (0.5 * d1 - 1) * np.log(xc)
                - 0.5 * (d1 + d2) * np.log(d1 * xc + d2)
                - log_beta(0.5 * d1, 0.5 * d2)
            )
            out = np.where(pos, np.exp(logd), 0.0)
            if d1 == 2:
                out = np.where(xs == 0, 1.0, out)
            elif d1 < 2:
                out = np.where(xs == 0, np.inf, out)
        else:
            h = 0.5 * p["df"]
            pos = xs > 0
            xc = np.where(pos, xs, 1.0)
            logd = (h - 1) * np.log(xc) - 0.5 * xc - h * math.log(2.0) - log_gamma(h)
            out = np.where(pos, np.exp(logd), 0.0)
    return _finish(np.asarray(out, dtype=float), scalar, shape)


def support(spec: DistSpec) -> tuple[float, float]:
    k, p = spec.kind, spec.params
    if k in (Kind.NORMAL, Kind.STUDENT_T):
        return -math.inf, math.inf
    if k is Kind.UNIFORM:
        return p["a"], p["b"]
    if k is Kind.BETA:
        return 0.0, 1.0
    return 0.0, math.inf


_QUANTILE_MAX_ITER = 200


def quantile(spec: DistSpec, q: float) -> float:
    """Inverse CDF by bracketing, then safeguarded Newton iteration."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError("quantile level must lie in (0, 1)")
    k, p = spec.kind, spec.params
    if k is Kind.UNIFORM:
        return p["a"] + q * (p["b"] - p["a"])
    if k is Kind.EXPONENTIAL:
        return -math.log1p(-q) / p["lambda"]
    lo_sup, hi_sup = support(spec)
    if k in (Kind.NORMAL, Kind.STUDENT_T):
        centre = p.get("mu", 0.0)
        width = p.get("sigma", 1.0)
        lo, hi = centre - width, centre + width
        while cdf(spec, lo) > q:
            lo = centre - 2.0 * (centre - lo)
        while cdf(spec, hi) < q:
            hi = centre + 2.0 * (hi - centre)
    elif math.isinf(hi_sup):
        lo, hi = 0.0, 1.0
        while cdf(spec, hi) < q:
            lo, hi = hi, 2.0 * hi
    else:
        lo, hi = lo_sup, hi_sup
    # Newton steps from the density, falling back to bisection when a step leaves the bracket
    x = 0.5 * (lo + hi)
    for _ in range(_QUANTILE_MAX_ITER):
        c = cdf(spec, x)
        if abs(c - q) <= 1e-13:
            return x
        if c < q:
            lo = x
        else:
            hi = x
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            return mid
        d = pdf(spec, x)
        step = x - (c - q) / d if d > 0 else math.nan
        x = step if lo < step < hi else mid
        if hi - lo <= 1e-10 * max(1.0, abs(mid)) and abs(cdf(spec, mid) - q) <= 1e-10:
            return mid
    raise ConvergenceError(f"quantile search did not converge for {spec.label()} at {q}")


def draw(spec: DistSpec, rng: np.random.Generator, size) -> np.ndarray:
    """Draw from ``spec`` using an existing generator (block-level helper)."""
    k, p = spec.kind, spec.params
    if k is Kind.NORMAL:
        return rng.normal(p["mu"], p["sigma"], size)
    if k is Kind.UNIFORM:
        return rng.uniform(p["a"], p["b"], size)
    if k is Kind.EXPONENTIAL:
        return rng.exponential(1.0 / p["lambda"], size)
    if k is Kind.BETA:
        if p["a"] == 0.5 and p["b"] == 0.5:
            # arcsine law: closed-form inverse CDF
            return np.sin(0.5 * math.pi * rng.random(size)) ** 2
        return rng.beta(p["a"], p["b"], size)
    raise DomainError(f"sampling not supported for {k.value}")


def sample(spec: DistSpec, n: int, seed: RngSeed) -> np.ndarray:
    """``n`` reproducible draws from ``spec``; same seed, same sequence."""
    if spec.kind not in SAMPLEABLE:
        raise DomainError(f"sampling not supported for {spec.kind.value}")
    if n < 1:
        raise DomainError("n must be >= 1")
    return draw(spec, seed.generator(), int(n))

