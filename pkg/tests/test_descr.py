import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qstat.descr import GroupSample, grand_mean, kurtosis, moments, pdu, pooled_variance
from qstat.errors import DegenerateDataError, InsufficientDataError

scores = st.lists(st.floats(-50, 50, allow_nan=False), min_size=3, max_size=40)


def test_moments_hand_arithmetic():
    s = moments(GroupSample("a", [1, 2, 3]))
    assert s.n == 3 and s.mean == 2.0 and s.variance == 1.0 and s.sos == 1.0


def test_constant_group():
    s = moments(GroupSample("c", [4, 4, 4, 4]))
    assert s.variance == 0.0 and s.sos == 0.0
    assert np.isnan(s.kurtosis)
    with pytest.raises(DegenerateDataError):
        kurtosis([4, 4, 4, 4])


def test_surrogate_group1_fixture(surrogate_groups):
    s = moments(surrogate_groups[0])
    assert s.n == 26
    assert s.mean == pytest.approx(5.5769, abs=1e-9)
    assert s.variance == pytest.approx(3.1338, abs=1e-9)
    assert s.kurtosis == pytest.approx(1.7971, abs=1e-9)


def test_surrogate_fixture_all_groups(surrogate_groups):
    expected = [(5.5769, 3.1338, 1.7971), (7.3846, 3.2862, 6.9602), (7.3077, 2.4615, 6.4978)]
    for g, (m, v, k) in zip(surrogate_groups, expected):
        s = moments(g)
        assert (s.mean, s.variance, s.kurtosis) == pytest.approx((m, v, k), abs=1e-9)


def test_insufficient_and_invalid():
    with pytest.raises(InsufficientDataError):
        moments(GroupSample("one", [3.0]))
    with pytest.raises(InsufficientDataError):
        GroupSample("empty", [])
    with pytest.raises(ValueError):
        GroupSample("bad", [1.0, float("nan")])


def test_pooled_variance_examples():
    assert pooled_variance(2.5, 7, 2.5, 19) == pytest.approx(2.5, abs=1e-15)
    assert pooled_variance(3.1338, 26, 3.2862, 26) == pytest.approx(3.2100, abs=1e-12)
    assert pooled_variance(1, 2, 9, 2) == 5
    assert pooled_variance(1, 3, 4, 5) == pytest.approx((1 * 2 + 4 * 4) / 6)
    with pytest.raises(InsufficientDataError):
        pooled_variance(1, 1, 1, 5)


@given(v1=st.floats(0, 1e6), v2=st.floats(0, 1e6), n=st.integers(2, 1000))
def test_pooled_equal_sizes_is_midpoint(v1, v2, n):
    assert pooled_variance(v1, n, v2, n) == (v1 + v2) / 2


@given(v1=st.floats(0, 1e6), v2=st.floats(0, 1e6), n1=st.integers(2, 500), n2=st.integers(2, 500))
def test_pooled_between_inputs(v1, v2, n1, n2):
    p = pooled_variance(v1, n1, v2, n2)
    assert min(v1, v2) * (1 - 1e-12) <= p <= max(v1, v2) * (1 + 1e-12)


def test_grand_mean_examples():
    g = GroupSample("a", [1.0, 2.0, 6.0])
    assert grand_mean([g]) == 3.0
    assert grand_mean([GroupSample("a", [1, 1]), GroupSample("b", [3, 3])]) == 2.0
    with pytest.raises(InsufficientDataError):
        grand_mean([])


def test_grand_mean_surrogates(surrogate_groups):
    assert grand_mean(surrogate_groups) == pytest.approx((5.5769 + 7.3846 + 7.3077) / 3, abs=1e-12)
    assert grand_mean(surrogate_groups) == pytest.approx(6.75640, abs=1e-5)


def test_grand_mean_vs_mean_of_means():
    a, b = GroupSample("a", [1, 2, 3]), GroupSample("b", [10, 20, 30])
    assert grand_mean([a, b]) == pytest.approx((2 + 20) / 2)
    c = GroupSample("c", [10, 20, 30, 40, 50])
    assert grand_mean([a, c]) != pytest.approx((2 + 30) / 2)


def test_pdu_examples():
    g = GroupSample("g", [1, 2, 3, 4])
    assert pdu(g, 0.5) == 0.0
    assert pdu(g, 4.5) == 1.0
    assert pdu(g, 3) == 0.5


@given(x=scores, c=st.floats(-100, 100))
def test_translation_invariance(x, c):
    x = np.array(x)
    assume(np.ptp(x) > 1e-3)
    a, b = moments(GroupSample("x", x)), moments(GroupSample("y", x + c))
    assert b.mean == pytest.approx(a.mean + c, abs=1e-10)
    assert b.variance == pytest.approx(a.variance, rel=1e-9, abs=1e-9)
    assert b.kurtosis == pytest.approx(a.kurtosis, rel=1e-6)


@given(x=scores, c=st.floats(0.01, 100).flatmap(lambda v: st.sampled_from([v, -v])))
def test_scale_invariance(x, c):
    x = np.array(x)
    assume(np.ptp(x) > 1e-3)
    a, b = moments(GroupSample("x", x)), moments(GroupSample("y", x * c))
    assert b.variance == pytest.approx(a.variance * c * c, rel=1e-9)
    assert b.kurtosis == pytest.approx(a.kurtosis, rel=1e-9)


def test_translation_exact_example():
    x = np.array([1.0, 4.0, 2.0, 8.0, 5.0])
    a, b = moments(GroupSample("x", x)), moments(GroupSample("y", x + 3.0))
    assert abs(b.variance - a.variance) <= 1e-12
    assert abs(b.kurtosis - a.kurtosis) <= 1e-12
    assert abs(b.sos - a.sos) <= 1e-12
