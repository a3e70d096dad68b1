import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize, special, stats

from spectpd.persistence import DensityModel, semicircle_cdf
from spectpd.spectral_stats import (
    KsResult,
    bulk_indices,
    kolmogorov_sf,
    ks_statistic,
    ks_test,
    normalized_spacing_variance,
    spacing_ratio,
    spacings,
    unfold_bulk,
    wigner_surmise,
    wigner_surmise_cdf,
)


def test_spacings_examples():
    np.testing.assert_array_equal(spacings([0.0, 1.0, 3.0]).values, [1.0, 2.0])
    np.testing.assert_array_equal(spacings([2.0] * 5).values, np.zeros(4))
    assert not spacings([0.0, 1.0]).unfolded


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=100).map(sorted))
def test_spacing_sum_compensated(lam):
    # oracle: direct subtraction; only the rounding of each difference separates them
    total = math.fsum(spacings(lam).values)
    assert total == pytest.approx(lam[-1] - lam[0], rel=1e-12, abs=1e-9)


def test_spacing_ratio_examples():
    assert spacing_ratio(np.arange(10.0)) == 1.0
    assert spacing_ratio([0.0, 1.0, 3.0]) == 0.5
    assert spacing_ratio([1.0, 1.0, 1.0, 2.0]) == pytest.approx((1.0 + 0.0) / 2)
    with pytest.raises(ValueError):
        spacing_ratio([0.0, 1.0])


@settings(max_examples=200)
@given(
    st.lists(st.floats(1e-3, 10), min_size=2, max_size=50),
    st.floats(1e-2, 1e2),
    st.floats(-1e3, 1e3),
)
def test_spacing_ratio_affine_invariant(gaps, a, b):
    lam = np.concatenate([[0.0], np.cumsum(gaps)])
    # rounding of a*lam + b perturbs each spacing by a few ulps of the shifted values
    slack = 8 * np.finfo(float).eps * (abs(b) + a * lam[-1]) / (a * min(gaps))
    assert spacing_ratio(a * lam + b) == pytest.approx(spacing_ratio(lam), rel=1e-9 + slack, abs=slack)


def _semicircle_quantiles(n):
    return np.array(
        [optimize.brentq(lambda x, q=k / (n + 1): semicircle_cdf(x) - q, -2, 2, xtol=1e-15) for k in range(1, n + 1)]
    )


def test_unfold_quantile_spectrum_is_flat():
    n = 1000
    lam = _semicircle_quantiles(n)
    u = unfold_bulk(lam, DensityModel.semicircle(), 0.8)
    assert u.unfolded
    assert len(u) == 799
    np.testing.assert_allclose(u.values, 1.0, rtol=0.02)


def test_bulk_selection():
    assert len(unfold_bulk(np.linspace(-1, 1, 10), DensityModel.semicircle(), 1.0)) == 9
    assert bulk_indices(100, 0.8) == slice(10, 90)
    assert bulk_indices(10, 1.0) == slice(0, 10)
    with pytest.raises(ValueError):
        unfold_bulk(np.linspace(-1, 1, 3), DensityModel.semicircle(), 0.1)
    with pytest.raises(ValueError):
        bulk_indices(10, 0.0)


def test_surmise_level_repulsion_and_normalization():
    for beta in (1, 2):
        assert wigner_surmise(beta, 0.0) == 0.0
        mass, _ = integrate.quad(lambda s: wigner_surmise(beta, s), 0, np.inf, epsabs=1e-13)
        mean, _ = integrate.quad(lambda s: s * wigner_surmise(beta, s), 0, np.inf, epsabs=1e-13)
        assert mass == pytest.approx(1.0, abs=1e-8)
        assert mean == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        wigner_surmise(4, 1.0)


@pytest.mark.parametrize("beta", [1, 2])
def test_surmise_cdf_matches_integrated_pdf(beta):
    for s in np.linspace(0, 4, 41):
        num, _ = integrate.quad(lambda t: wigner_surmise(beta, t), 0, s, epsabs=1e-13, epsrel=1e-12, limit=200)
        assert wigner_surmise_cdf(beta, s) == pytest.approx(num, abs=1e-10)
    assert wigner_surmise_cdf(beta, 50.0) == pytest.approx(1.0, abs=1e-15)


def test_ks_statistic_hand_enumeration():
    pts = [0.1, 0.5, 0.9]
    # brute force over the six step corners
    corners = []
    for i, x in enumerate(sorted(pts)):
        corners += [abs((i + 1) / 3 - x), abs(x - i / 3)]
    assert ks_statistic(pts, lambda x: x) == pytest.approx(max(corners), abs=1e-15)
    assert ks_statistic(pts, lambda x: x) == pytest.approx(0.7 / 3, abs=1e-15)


def test_ks_needs_ten_samples():
    with pytest.raises(ValueError):
        ks_test(np.linspace(0, 1, 9), lambda x: x)


@pytest.mark.parametrize("x", [0.05, 0.2, 0.5, 0.8, 0.99, 1.0, 1.2, 1.5, 2.0, 3.0])
def test_kolmogorov_sf_vs_scipy(x):
    assert kolmogorov_sf(x) == pytest.approx(special.kolmogorov(x), abs=1e-10)


def test_kolmogorov_sf_monotone():
    xs = np.linspace(0, 4, 400)
    p = [kolmogorov_sf(x) for x in xs]
    assert p[0] == 1.0
    assert all(a >= b for a, b in zip(p, p[1:]))


def test_ks_null_calibration():
    rng = np.random.default_rng(11)
    pvals = []
    for _ in range(200):
        u = rng.random(10_000)
        s = np.sqrt(-4 * np.log1p(-u) / math.pi)  # inverse transform for the beta=1 surmise
        res = ks_test(s, lambda x: wigner_surmise_cdf(1, x))
        assert isinstance(res, KsResult) and 0 <= res.statistic <= 1 and res.sample_size == 10_000
        pvals.append(res.p_value)
    assert stats.kstest(pvals, "uniform").pvalue > 0.01


def test_normalized_spacing_variance_examples():
    assert normalized_spacing_variance(np.ones(7)) == 0.0
    assert normalized_spacing_variance([1.0, 3.0]) == 0.25
    with pytest.raises(ValueError):
        normalized_spacing_variance([0.0, 0.0])
    with pytest.raises(ValueError):
        normalized_spacing_variance([1.0])


@given(st.lists(st.floats(1e-3, 10), min_size=2, max_size=50), st.floats(1e-3, 1e3))
def test_normalized_spacing_variance_scale_invariant(sp, c):
    assert normalized_spacing_variance(np.array(sp) * c) == pytest.approx(
        normalized_spacing_variance(sp), rel=1e-9, abs=1e-15
    )
