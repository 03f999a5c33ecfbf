import numpy as np
import pytest

from fdband.basis import FourierBasis
from fdband.bootstrap import (ConfidenceBand, band_overlap, bootstrap_band, bootstrap_means,
                              bootstrap_summary, bootstrap_variance, resample_indices)
from fdband.smoother import CurveEnsemble

B5 = FourierBasis(5)
GRID = np.arange(1, 366, 4.0)


def block(coeffs, grid=GRID):
    coeffs = np.atleast_2d(coeffs)
    return CurveEnsemble(B5, coeffs, tuple(range(2000, 2000 + len(coeffs))), grid)


@pytest.fixture
def noisy_block():
    rng = np.random.default_rng(7)
    c = np.array([10.0, 3.0, -1.0, 0.5, 0.2])
    return block(c + rng.normal(0, 0.4, (12, 5)))


def test_single_curve_block_is_degenerate():
    b = block([10.0, 1.0, 2.0, 0.0, 0.3])
    band = bootstrap_band(b, 200, seed=1)
    curve = b.values()[0]
    np.testing.assert_allclose(band.lower, curve, rtol=0, atol=1e-12)
    np.testing.assert_allclose(band.upper, curve, rtol=0, atol=1e-12)
    np.testing.assert_allclose(band.center, curve, rtol=0, atol=1e-12)
    np.testing.assert_allclose(bootstrap_variance(b, 200, seed=1).values, 0, atol=1e-20)


def test_identical_curves_zero_width():
    c = [10.0, 1.0, 2.0, 0.0, 0.3]
    band = bootstrap_band(block([c] * 6), 300, seed=2)
    assert np.max(band.upper - band.lower) <= 1e-12
    np.testing.assert_allclose(bootstrap_variance(block([c] * 6), 300, seed=2).values, 0, atol=1e-20)


def test_two_curve_block_against_enumeration():
    # Resampled mean of {f, g} with n=2 is (k f + (2-k) g)/2, k ~ Binomial(2, 1/2):
    # mean (f+g)/2 and variance (f-g)^2/8.
    f = np.array([10.0, 1.0, 0.0, 0.0, 0.0])
    g = np.array([12.0, 0.0, 2.0, 0.5, 0.0])
    b = block([f, g])
    fv, gv = b.values()
    exact_mean = (fv + gv) / 2
    exact_var = (fv - gv) ** 2 / 8
    n_boot = 20000
    band = bootstrap_band(b, n_boot, seed=11)
    se = np.sqrt(exact_var / n_boot)
    assert np.all(np.abs(band.center - exact_mean) <= 3 * se + 1e-12)
    # the 2.5%/97.5% quantiles of a 3-point distribution with mass 1/4,1/2,1/4 are g and f
    np.testing.assert_allclose(band.lower, np.minimum(fv, gv), atol=1e-12)
    np.testing.assert_allclose(band.upper, np.maximum(fv, gv), atol=1e-12)


def test_bootstrap_variance_closed_form(noisy_block):
    vals = noisy_block.values()
    n = vals.shape[0]
    expected = (n - 1) / n * vals.var(axis=0, ddof=1) / n
    n_boot = 20000
    got = bootstrap_variance(noisy_block, n_boot, seed=5).values
    # sampling sd of a variance estimate from B draws is about var*sqrt(2/B)
    assert np.all(np.abs(got - expected) <= 5 * expected * np.sqrt(2 / n_boot))


def test_determinism_and_parallelism(noisy_block):
    a = bootstrap_band(noisy_block, 1000, seed=3)
    b = bootstrap_band(noisy_block, 1000, seed=3, workers=4)
    assert a.to_csv() == b.to_csv()
    c = bootstrap_band(noisy_block, 1000, seed=4)
    assert a.to_csv() != c.to_csv()
    d = bootstrap_band(noisy_block, 1000, seed=3, stream=(0, 1, 2))
    assert a.to_csv() != d.to_csv()


def test_replicates_are_prefix_stable(noisy_block):
    full = bootstrap_means(noisy_block, 600, seed=9)
    part = bootstrap_means(noisy_block, 300, seed=9)
    np.testing.assert_array_equal(full[:300], part)
    np.testing.assert_array_equal(resample_indices(12, 10, 9, 0, 5), resample_indices(12, 15, 9)[5:])


def test_band_ordering_and_monotone_level(noisy_block):
    narrow = bootstrap_band(noisy_block, 2000, 0.90, seed=8)
    wide = bootstrap_band(noisy_block, 2000, 0.99, seed=8)
    for band in (narrow, wide):
        assert np.all(band.lower <= band.center) and np.all(band.center <= band.upper)
    assert np.all(wide.lower <= narrow.lower) and np.all(wide.upper >= narrow.upper)


def test_quantile_sanity(noisy_block):
    n_boot, level = 1000, 0.95
    means = bootstrap_means(noisy_block, n_boot, seed=12)
    band = bootstrap_band(noisy_block, n_boot, level, seed=12)
    below = (means < band.lower).mean(axis=0)
    above = (means > band.upper).mean(axis=0)
    assert np.all(below <= (1 - level) / 2 + 1 / n_boot)
    assert np.all(above <= (1 - level) / 2 + 1 / n_boot)


def test_shift_equivariance(noisy_block):
    shifted = block(noisy_block.coeffs + np.array([2.5, 0, 0, 0, 0]))
    a = bootstrap_band(noisy_block, 500, seed=1)
    b = bootstrap_band(shifted, 500, seed=1)
    for k in ("lower", "center", "upper"):
        np.testing.assert_allclose(getattr(b, k) - getattr(a, k), 2.5, atol=1e-12)


def test_summary_matches_separate_calls(noisy_block):
    band, var = bootstrap_summary(noisy_block, 400, 0.95, seed=2)
    assert band.to_csv() == bootstrap_band(noisy_block, 400, 0.95, seed=2).to_csv()
    np.testing.assert_array_equal(var.values, bootstrap_variance(noisy_block, 400, seed=2).values)


def test_errors(noisy_block):
    with pytest.raises(ValueError):
        bootstrap_band(noisy_block, 0)
    with pytest.raises(ValueError):
        bootstrap_band(noisy_block, 10, level=1.0)
    empty = CurveEnsemble(B5, np.empty((0, 5)), (), GRID)
    with pytest.raises(ValueError):
        bootstrap_band(empty, 10)


def _band(lower, upper, grid=(1.0,), level=0.95):
    lower, upper = np.array(lower, float), np.array(upper, float)
    return ConfidenceBand(np.array(grid), lower, (lower + upper) / 2, upper, level, 1, 0)


def test_band_overlap():
    a = _band([0.0, 0.0], [1.0, 1.0], grid=(1, 2))
    np.testing.assert_array_equal(band_overlap(a, a).values, [1.0, 1.0])
    np.testing.assert_array_equal(band_overlap(_band([0], [1]), _band([2], [3])).values, [-1.0])
    np.testing.assert_array_equal(band_overlap(_band([0], [2]), _band([1], [3])).values, [1.0])
    with pytest.raises(ValueError):
        band_overlap(a, _band([0, 0], [1, 1], grid=(1, 3)))
    with pytest.raises(ValueError):
        band_overlap(a, _band([0, 0], [1, 1], grid=(1, 2), level=0.9))


def test_band_csv_roundtrip(noisy_block):
    band = bootstrap_band(noisy_block, 100, seed=1)
    text = band.to_csv()
    assert "# level: 0.95" in text and "# b_samples: 100" in text and "# block_years: 2000-2011" in text
    again = ConfidenceBand.from_csv(text)
    assert again.to_csv() == text
