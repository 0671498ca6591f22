from fractions import Fraction

import pytest

from zds.distribution import (ExactDistribution, chi2_from_s, exact_cdf, exact_distribution,
                              exact_p_value, from_counts, resolve_s, reuse_subdistribution,
                              s_from_chi2, support_bounds)
from zds.engine import SynthesisSpec, synthesize


@pytest.fixture(scope="module")
def d44():
    return exact_distribution(4, 4)


@pytest.fixture(scope="module")
def nist():
    return exact_distribution(55, 10)


def test_from_counts(d44):
    assert d44.pmf_dict() == {4: Fraction(24, 256), 6: Fraction(144, 256), 8: Fraction(36, 256),
                              10: Fraction(48, 256), 16: Fraction(4, 256)}
    assert d44.total == 256
    assert d44.cumulative[-1] == d44.total
    assert exact_distribution(1, 2).pmf_dict() == {1: 1}
    assert exact_distribution(2, 2).pmf_dict() == {2: Fraction(1, 2), 4: Fraction(1, 2)}


def test_from_counts_rejects_capped_tables():
    with pytest.raises(ValueError, match="incomplete"):
        from_counts(synthesize(SynthesisSpec(4, 4, s_cap=8)))


def test_float_view_is_correctly_rounded(nist):
    for s, c in zip(nist.support, nist.counts):
        assert float(nist.pmf(s)) == float(Fraction(c, nist.total))
    assert nist.total == 10 ** 55


def test_reuse_subdistribution():
    table = synthesize(SynthesisSpec(5, 3, retain_layers=True))
    assert reuse_subdistribution(table, 3, 2).pmf_dict() == {5: Fraction(3, 4), 9: Fraction(1, 4)}
    assert reuse_subdistribution(table, 5, 3) == from_counts(table)
    assert reuse_subdistribution(table, 0, 1).pmf_dict() == {0: 1}


def test_reuse_needs_retained_layers():
    with pytest.raises(ValueError, match="retain_layers"):
        reuse_subdistribution(synthesize(SynthesisSpec(5, 3)), 3, 2)


@pytest.mark.parametrize("N, n, s, chi2", [(55, 10, 495, 35), (4, 4, 4, 0), (4, 4, 16, 12)])
def test_chi2_from_s(N, n, s, chi2):
    assert chi2_from_s(N, n, s) == chi2


def test_s_from_chi2():
    assert s_from_chi2(55, 10, 35.0) == 495
    assert s_from_chi2(55, 10, 33.90909090909091) == 489
    assert s_from_chi2(4, 4, 0.0) == 4
    assert s_from_chi2(55, 10, 34.0) == (489, 490)
    assert s_from_chi2(55, 10, Fraction(373, 11)) == 489


def test_resolve_s_snaps_up_to_achievable(nist):
    assert resolve_s(nist, 33.909090909) == 489
    # 489.5 is not achievable; next support point is 491
    assert resolve_s(nist, 34.0) == 491
    with pytest.raises(ValueError):
        resolve_s(nist, 10_000.0)


def test_exact_cdf(d44):
    assert exact_cdf(d44, 6) == Fraction(168, 256)
    assert exact_cdf(d44, 3) == 0
    assert exact_cdf(d44, 16) == 1
    assert exact_cdf(d44, 7) == exact_cdf(d44, 6)


def test_exact_p_value(d44, nist):
    assert exact_p_value(d44, 6) == Fraction(232, 256)
    assert exact_p_value(d44, 4) == 1
    assert float(exact_p_value(nist, 489)) == pytest.approx(1.59e-4, rel=0.01)


def test_exact_p_value_requires_support_point(d44):
    with pytest.raises(ValueError, match="6 and 8"):
        exact_p_value(d44, 7)


@pytest.mark.parametrize("N, n, expected", [(10, 3, (34, 100)), (7, 7, (7, 49)), (4, 4, (4, 16))])
def test_support_bounds(N, n, expected):
    assert support_bounds(N, n) == expected


def test_distribution_validation():
    with pytest.raises(ValueError):
        ExactDistribution(2, 2, (4, 2), (2, 2), 4)
    with pytest.raises(ValueError):
        ExactDistribution(2, 2, (2, 4), (2, 0), 2)
    with pytest.raises(ValueError):
        ExactDistribution(2, 2, (2, 4), (2, 2), 5)
