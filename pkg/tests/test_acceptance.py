"""Acceptance criteria, each at its stated tolerance.

Every test prints one ``[PASS]``/``[FAIL]`` line (visible under ``pytest -v``
and when this file is run as a script) before asserting.
"""

import json
import math
import time

import numpy as np
import pytest

from qstat import dist
from qstat.cli import main
from qstat.descr import GroupSample, kurtosis
from qstat.dist import DistSpec
from qstat.resample import permutation_null, permutation_p_value
from qstat.rng import RngSeed
from qstat.sim import two_step_experiment
from qstat.stattests import (
    anova_oneway,
    anova_oneway_summary,
    c_pooled_factor,
    t_test_pooled,
    t_test_pooled_summary,
    t_test_welch,
    t_test_welch_summary,
)
from qstat.synthetic import surrogate_groups
from qstat.workflow import variance_homogeneity_check

pytestmark = pytest.mark.slow

_printer = print


def verdict(label: str, ok: bool, detail: str) -> None:
    _printer(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _printer

    def show(line):
        with capsys.disabled():
            print(line)

    _printer = show
    yield
    _printer = print


# exact central moments mu2..mu8 of the reference laws (scale-free for kurtosis)
_CENTRAL = {
    "normal": dict(m2=1.0, m3=0.0, m4=3.0, m5=0.0, m6=15.0, m8=105.0),
    "uniform": dict(m2=1 / 12, m3=0.0, m4=1 / 80, m5=0.0, m6=1 / 448, m8=1 / 2304),
    "exponential": dict(m2=1.0, m3=2.0, m4=9.0, m5=44.0, m6=265.0, m8=14833.0),
    "beta": dict(m2=1 / 8, m3=0.0, m4=3 / 128, m5=0.0, m6=5 / 1024, m8=35 / 32768),
}


def kurtosis_se(name: str, n: int) -> float:
    """Delta-method standard error of m4 / m2^2."""
    c = _CENTRAL[name]
    m2, m3, m4, m5, m6, m8 = (c[k] for k in ("m2", "m3", "m4", "m5", "m6", "m8"))
    var_m4 = m8 - m4**2 - 8 * m3 * m5 + 16 * m2 * m3**2
    cov = m6 - m2 * m4 - 4 * m3**2
    var_m2 = m4 - m2**2
    v = var_m4 / m2**4 - 4 * m4 * cov / m2**5 + 4 * m4**2 * var_m2 / m2**6
    return math.sqrt(v / n)


def test_kurtosis_se_oracle():
    # closed forms: normal 24/n, exponential 8064/n
    assert kurtosis_se("normal", 1) == pytest.approx(math.sqrt(24), rel=1e-12)
    assert kurtosis_se("exponential", 1) == pytest.approx(math.sqrt(8064), rel=1e-12)


@pytest.mark.parametrize("name", sorted(dist.REFERENCE_DISTS))
def test_criterion_1_clt(name, tmp_path, capsys):
    out = tmp_path / "clt.json"
    start = time.perf_counter()
    code = main(["sim", "clt", "--dist", name, "--k", "5", "--n", "25", "--iters", "100000", "--seed", "7", "--out", str(out)])
    elapsed = time.perf_counter() - start
    assert code == 0
    d = json.loads(out.read_text())
    ks, mean = d["ks_distance"], d["mean"]
    ok = ks < 0.02 and abs(mean - 120 / 118) <= 0.01 and elapsed < 30
    verdict(f"1 CLT {name}", ok, f"KS={ks:.4f} (<0.02) mean={mean:.4f} (1.0169+-0.01) time={elapsed:.1f}s")


@pytest.mark.parametrize("name", sorted(dist.REFERENCE_DISTS))
def test_criterion_2_sampler_kurtosis(name):
    n = 1_000_000
    k = kurtosis(dist.sample(dist.REFERENCE_DISTS[name], n, RngSeed(2024)))
    target = dist.REFERENCE_KURTOSIS[name]
    se = kurtosis_se(name, n)
    ok = abs(k - target) <= 3 * se
    verdict(f"2 kurtosis {name}", ok, f"{k:.4f} vs {target} (3 SE = {3 * se:.4f})")


def test_criterion_3_summary_analytics():
    t = t_test_pooled_summary(5.5769, 3.1338, 26, 7.3846, 3.2862, 26)
    f = anova_oneway_summary([5.5769, 7.3846, 7.3077], [3.1338, 3.2862, 2.4615], [26, 26, 26])
    chk = variance_homogeneity_check(surrogate_groups())
    ok = (
        abs(t.statistic + 3.638) <= 0.001
        and t.df == 50
        and abs(f.statistic - 9.18) <= 0.01
        and f.df == (2, 75)
        and abs(chk.ratio - 0.749) <= 0.001
        and not chk.heterogeneous
    )
    verdict(
        "3 summary-form analytics",
        ok,
        f"t={t.statistic:.4f} df={t.df}; F={f.statistic:.4f} df={f.df}; ratio={chk.ratio:.4f} het={chk.heterogeneous}",
    )


def test_criterion_4_resampling():
    groups = surrogate_groups()
    start = time.perf_counter()
    f = permutation_null(groups, "f_anova", 100_000, RngSeed(4))
    t = permutation_null(groups[:2], "t_pooled", 100_000, RngSeed(4, 1))
    elapsed = time.perf_counter() - start
    ok = f.ks_distance < 0.03 and t.ks_distance < 0.03 and elapsed < 60
    verdict("4 resampling", ok, f"KS F(2,75)={f.ks_distance:.4f} KS t(50)={t.ks_distance:.4f} time={elapsed:.1f}s")


def test_criterion_5_distribution_identities():
    specs = [
        DistSpec.normal(),
        DistSpec.normal(3.0, 2.0),
        DistSpec.uniform(0, 1),
        DistSpec.exponential(0.5),
        DistSpec.beta(0.5, 0.5),
        DistSpec.beta(2.0, 5.0),
        DistSpec.chi_squared(3),
        *(DistSpec.student_t(df) for df in (1, 5, 50, 120)),
        *(DistSpec.f(a, b) for a, b in ((4, 120), (2, 75), (1, 50), (10, 3))),
    ]
    probs = (0.01, 0.05, 0.1, 0.5, 0.9, 0.95, 0.99)
    worst_rt = 0.0
    monotone = True
    for s in specs:
        for p in probs:
            worst_rt = max(worst_rt, abs(dist.cdf(s, dist.quantile(s, p)) - p))
        lo, hi = dist.quantile(s, 0.001), dist.quantile(s, 0.999)
        monotone &= bool(np.all(np.diff(dist.cdf(s, np.linspace(lo, hi, 2001))) >= 0))
    grid = np.linspace(-10, 10, 2001)
    worst_sym = max(
        float(np.max(np.abs(dist.cdf(DistSpec.student_t(df), grid) + dist.cdf(DistSpec.student_t(df), -grid) - 1)))
        for df in (1, 5, 50, 120)
    )
    xs = np.geomspace(1e-4, 1e4, 801)
    worst_recip = max(
        float(np.max(np.abs(dist.cdf(DistSpec.f(a, b), xs) + dist.cdf(DistSpec.f(b, a), 1 / xs) - 1)))
        for a, b in ((4, 120), (2, 75), (1, 1), (7, 3), (30, 12))
    )
    cauchy = abs(dist.cdf(DistSpec.student_t(1), 1.0) - 0.75)
    limit = abs(dist.quantile(DistSpec.student_t(1e6), 0.975) - 1.959964)
    ok = worst_rt <= 1e-9 and monotone and worst_sym <= 1e-12 and worst_recip <= 1e-10 and cauchy <= 1e-12 and limit < 1e-3
    verdict(
        "5 distribution identities",
        ok,
        f"round-trip {worst_rt:.1e}, monotone {monotone}, t-sym {worst_sym:.1e}, F-recip {worst_recip:.1e}, "
        f"t1(1) err {cauchy:.1e}, t(1e6) q err {limit:.1e}",
    )


def test_criterion_6_algebraic_identities():
    rng = np.random.default_rng(606)
    worst_ft = worst_wp = worst_c = 0.0
    for _ in range(500):
        n1, n2 = rng.integers(2, 40, size=2)
        a = GroupSample("a", rng.normal(rng.uniform(-3, 3), rng.uniform(0.2, 4), n1))
        b = GroupSample("b", rng.normal(rng.uniform(-3, 3), rng.uniform(0.2, 4), n2))
        t, f = t_test_pooled(a, b), anova_oneway([a, b])
        worst_ft = max(worst_ft, abs(f.statistic - t.statistic**2) / max(t.statistic**2, 1e-300))
        m = min(n1, n2)
        ae, be = GroupSample("a", a.scores[:m]), GroupSample("b", b.scores[:m])
        worst_wp = max(worst_wp, abs(t_test_welch(ae, be).statistic - t_test_pooled(ae, be).statistic))
        v1, v2 = rng.uniform(0.1, 10, size=2)
        worst_c = max(worst_c, abs(c_pooled_factor(n1, n1, v1, v2) - 1), abs(c_pooled_factor(n1, n2, v1, v1) - 1))
    n = rng.integers(2, 500, size=(10_000, 2))
    v = rng.uniform(1e-3, 1e3, size=(10_000, 2))
    df_ok = all(
        t_test_welch_summary(0.0, v[i, 0], n[i, 0], 1.0, v[i, 1], n[i, 1]).df <= (n[i].sum() - 2) * (1 + 1e-12)
        for i in range(10_000)
    )
    ok = worst_ft <= 1e-9 and worst_wp <= 1e-12 and worst_c <= 1e-12 and df_ok
    verdict(
        "6 algebraic identities",
        ok,
        f"F vs t^2 rel {worst_ft:.1e}, Welch-pooled {worst_wp:.1e}, c_pooled {worst_c:.1e}, df_welch<=df_pooled {df_ok}",
    )


def test_criterion_7_two_step():
    normal = two_step_experiment(25, dist.REFERENCE_DISTS["normal"], 0.05, 10_000, RngSeed(70))
    expo = dist.REFERENCE_DISTS["exponential"]
    routing = []
    for s in (71, 72, 73):
        r25 = two_step_experiment(25, expo, 0.05, 1000, RngSeed(s)).rate_normality_reject
        r100 = two_step_experiment(100, expo, 0.05, 1000, RngSeed(s)).rate_normality_reject
        routing.append((r25, r100))
    ok = abs(normal.rate_direct - 0.05) <= 0.007 and all(b > a for a, b in routing)
    verdict(
        "7 two-step harness",
        ok,
        f"normal rate_direct={normal.rate_direct:.4f} (0.05+-0.007); exponential routing n=25->100: "
        + ", ".join(f"{a:.3f}->{b:.3f}" for a, b in routing),
    )


def test_criterion_8_permutation_agreement():
    diffs = []
    for s in range(20):
        rng = RngSeed(800, s).generator()
        a, b = GroupSample("a", rng.normal(0, 1, 25)), GroupSample("b", rng.normal(0, 1, 25))
        t = t_test_pooled(a, b)
        null = permutation_null([a, b], "t_pooled", 100_000, RngSeed(801, s))
        diffs.append(abs(permutation_p_value(t.statistic, null, "two_sided") - t.p_value))
    worst = max(diffs)
    verdict("8 permutation vs parametric p", worst <= 0.02, f"max |p_perm - p_t| over 20 seeds = {worst:.4f}")


def test_criterion_9_determinism(tmp_path, capsys, monkeypatch):
    data = tmp_path / "t2.csv"
    assert main(["sim", "treatment", "--seed", "9", "--out", str(data)]) == 0
    commands = [
        ["sim", "clt", "--dist", "beta", "--iters", "20000", "--seed", "9"],
        ["sim", "two-step", "--dist", "exponential", "--iters", "500", "--seed", "9"],
        ["sim", "treatment", "--seed", "9", "--mode", "heterogeneous", "--hetero-sigma", "0.7"],
        ["permute", str(data), "--iters", "20000", "--seed", "9"],
        ["permute", str(data), "--conditions", "c0", "c1", "--iters", "20000", "--seed", "9"],
    ]
    identical = True
    for cmd in commands:
        outputs = []
        for threads in ("1", "4"):
            monkeypatch.setenv("QSTAT_THREADS", threads)
            assert main(cmd) == 0
            outputs.append(capsys.readouterr().out)
        assert main(cmd) == 0
        outputs.append(capsys.readouterr().out)
        identical &= len(set(outputs)) == 1 and bool(outputs[0])
    verdict("9 determinism", identical, f"{len(commands)} commands byte-identical across reruns and thread counts")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
