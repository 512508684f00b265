import numpy as np
import pytest

from qstat import dist
from qstat.descr import GroupSample, moments
from qstat.dist import DistSpec
from qstat.errors import DomainError
from qstat.rng import RngSeed
from qstat.sim import (
    CltExperimentConfig,
    EffectMode,
    TreatmentConfig,
    clt_experiment,
    f_mean,
    generate_treatment_groups,
    jb_critical_value,
    resample_experiment,
    treatment_records,
    two_step_experiment,
)
from qstat.stattests import anova_oneway


@pytest.mark.parametrize("name", ["normal", "beta"])
def test_clt_examples(name):
    res = clt_experiment(CltExperimentConfig(dist.REFERENCE_DISTS[name], 5, 25, 100_000, RngSeed(7)))
    assert res.reference == DistSpec.f(4, 120)
    assert res.ks_distance < 0.02
    assert res.mean == pytest.approx(120 / 118, abs=0.01)


def test_f_mean():
    assert f_mean(4, 120) == pytest.approx(1.0169, abs=1e-4)
    assert f_mean(3, 2) == float("inf")


def test_clt_config_validation():
    with pytest.raises(DomainError):
        CltExperimentConfig(DistSpec.normal(), k=1)
    with pytest.raises(DomainError):
        CltExperimentConfig(DistSpec.normal(), n=1)
    with pytest.raises(DomainError):
        CltExperimentConfig(DistSpec.normal(), n_iter=0)
    with pytest.raises(DomainError):
        clt_experiment(CltExperimentConfig(DistSpec.student_t(5), n_iter=10))


def test_clt_deterministic():
    cfg = CltExperimentConfig(dist.REFERENCE_DISTS["uniform"], 3, 8, 3000, RngSeed(4))
    assert np.array_equal(clt_experiment(cfg).values, clt_experiment(cfg).values)


def test_resample_experiment_surrogates(surrogate_groups):
    f = resample_experiment(surrogate_groups, "f_anova", 100_000, RngSeed(21))
    assert f.reference == DistSpec.f(2, 75) and f.ks_distance < 0.03
    t = resample_experiment(surrogate_groups[:2], "t_pooled", 100_000, RngSeed(22))
    assert t.reference == DistSpec.student_t(50) and t.ks_distance < 0.03


def test_resample_constant_groups():
    g = [GroupSample(i, [3.0] * 6) for i in "abc"]
    res = resample_experiment(g, "f_anova", 500, RngSeed(0))
    assert res.n_degenerate == 500


def test_two_step_normal_direct_rate():
    r = two_step_experiment(25, dist.REFERENCE_DISTS["normal"], 0.05, 10_000, RngSeed(101))
    assert abs(r.rate_direct - 0.05) <= 0.007
    assert r.rate_two_step == pytest.approx(r.rate_reject_parametric_branch + r.rate_reject_permutation_branch)
    for v in (r.rate_direct, r.rate_two_step, r.rate_normality_reject):
        assert 0.0 <= v <= 1.0


def test_two_step_routing_grows_with_n():
    spec = dist.REFERENCE_DISTS["exponential"]
    # routing does not depend on the permutation count, so keep it small here
    small = two_step_experiment(25, spec, 0.05, 1000, RngSeed(5), n_perm=99)
    large = two_step_experiment(100, spec, 0.05, 1000, RngSeed(5), n_perm=99)
    assert large.rate_normality_reject > small.rate_normality_reject


def test_two_step_single_iteration():
    r = two_step_experiment(25, dist.REFERENCE_DISTS["uniform"], 0.05, 1, RngSeed(3), n_perm=99)
    for v in (r.rate_direct, r.rate_two_step, r.rate_normality_reject):
        assert v in (0.0, 1.0)


def test_two_step_validation():
    with pytest.raises(DomainError):
        two_step_experiment(3, DistSpec.normal(), 0.05, 10, RngSeed(0))
    with pytest.raises(DomainError):
        two_step_experiment(25, DistSpec.normal(), 1.5, 10, RngSeed(0))


def test_jb_critical_value_calibrated():
    c = jb_critical_value(25, 0.05)
    assert c == jb_critical_value(25, 0.05)
    # small-sample JB is conservative relative to chi2(2) at 5.99
    assert 2.0 < c < 5.99
    assert jb_critical_value(25, 0.01) > c


def test_treatment_systematic_equal_variances():
    cfg = TreatmentConfig(4.0, (0.0, -1.2, -3.1), 0.5, seed=RngSeed(8))
    groups = generate_treatment_groups(cfg)
    v = [moments(g).variance for g in groups]
    assert v[1] == pytest.approx(v[0], rel=1e-12) and v[2] == pytest.approx(v[0], rel=1e-12)
    means = [moments(g).mean for g in groups]
    assert means[0] - means[1] == pytest.approx(1.2, abs=1e-12)
    assert means[0] - means[2] == pytest.approx(3.1, abs=1e-12)


def test_treatment_zero_effects_identical_groups():
    groups = generate_treatment_groups(TreatmentConfig(3.5, (0.0, 0.0, 0.0), 0.7, seed=RngSeed(2)))
    assert all(np.array_equal(g.scores, groups[0].scores) for g in groups)
    res = anova_oneway(groups)
    assert res.statistic == 0.0 and res.p_value == 1.0


def test_treatment_heterogeneous_variance():
    cfg = TreatmentConfig(4.0, (0.0, -1.0), 0.5, EffectMode.HETEROGENEOUS, 1.0, n_subjects=200_000, seed=RngSeed(5))
    groups = generate_treatment_groups(cfg)
    sys_groups = generate_treatment_groups(TreatmentConfig(4.0, (0.0, -1.0), 0.5, n_subjects=200_000, seed=RngSeed(5)))
    for g, s in zip(groups, sys_groups):
        assert moments(g).variance == pytest.approx(0.25 + 1.0, rel=0.02)
        assert moments(g).variance > moments(s).variance


def test_treatment_records_and_ids():
    cfg = TreatmentConfig(4.0, (0.0, -1.2), 0.5, n_subjects=12, seed=RngSeed(1))
    rows = treatment_records(cfg)
    assert len(rows) == 24
    assert rows[0][:2] == ("s01", "c0") and rows[-1][:2] == ("s12", "c1")
    assert rows == treatment_records(cfg)


def test_treatment_validation():
    with pytest.raises(DomainError):
        TreatmentConfig(4.0, (), 0.5)
    with pytest.raises(DomainError):
        TreatmentConfig(4.0, (0.0,), 0.0)
    with pytest.raises(DomainError):
        TreatmentConfig(4.0, (0.0,), 0.5, hetero_sigma=-1)
