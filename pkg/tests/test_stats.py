import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdband.basis import FourierBasis
from fdband.smoother import CurveEnsemble
from fdband.stats import (BlockPartition, GridFunction, even_sizes, extrema_summary,
                          group_by_blocks, mean_difference, mean_function, preset_partition,
                          variance_function)

B7 = FourierBasis(7)


def ensemble(coeffs, first_year=1979):
    coeffs = np.atleast_2d(coeffs)
    return CurveEnsemble(B7, coeffs, tuple(range(first_year, first_year + len(coeffs))))


def base_coeffs():
    return np.array([10.0, 2.0, -3.0, 0.5, 0.1, 0.0, 0.2])


def test_mean_of_identical_curves():
    c = base_coeffs()
    ens = ensemble([c, c, c])
    np.testing.assert_allclose(mean_function(ens).values, ensemble([c]).values()[0], atol=1e-12)


def test_mean_and_variance_of_shifted_pair():
    f = base_coeffs()
    g = f.copy()
    g[0] += 2
    ens = ensemble([f, g])
    single = ensemble([f]).values()[0]
    np.testing.assert_allclose(mean_function(ens).values, single + 1, atol=1e-12)
    np.testing.assert_allclose(variance_function(ens).values, 2.0, atol=1e-12)
    np.testing.assert_allclose(variance_function(ensemble([f, f])).values, 0.0, atol=1e-20)


def test_errors():
    with pytest.raises(ValueError):
        variance_function(ensemble([base_coeffs()]))
    a = GridFunction([1, 2], [0, 0])
    with pytest.raises(ValueError):
        mean_difference(a, GridFunction([1, 3], [0, 0]))
    with pytest.raises(ValueError):
        GridFunction([1, 2], [0, np.inf])


def test_mean_difference():
    f = GridFunction(np.arange(1, 6), np.arange(5.0) ** 2)
    np.testing.assert_array_equal(mean_difference(f, f).values, 0)
    g = GridFunction(f.grid, f.values + 3)
    np.testing.assert_allclose(mean_difference(g, f).values, 3.0)


coeff_matrix = st.integers(2, 9).flatmap(
    lambda n: st.lists(st.lists(st.floats(-20, 20), min_size=7, max_size=7), min_size=n, max_size=n))


@settings(max_examples=40, deadline=None)
@given(F=coeff_matrix, alpha=st.floats(-3, 3), beta=st.floats(-3, 3), data=st.data())
def test_mean_is_linear(F, alpha, beta, data):
    F = np.array(F)
    G = np.array(data.draw(st.lists(st.lists(st.floats(-20, 20), min_size=7, max_size=7),
                                    min_size=len(F), max_size=len(F))))
    combo = mean_function(ensemble(alpha * F + beta * G)).values
    expected = alpha * mean_function(ensemble(F)).values + beta * mean_function(ensemble(G)).values
    np.testing.assert_allclose(combo, expected, atol=1e-10 * (1 + np.abs(expected).max()))


@settings(max_examples=40, deadline=None)
@given(F=coeff_matrix, shift=st.lists(st.floats(-50, 50), min_size=7, max_size=7))
def test_variance_translation_invariant_and_nonnegative(F, shift):
    F = np.array(F)
    v = variance_function(ensemble(F)).values
    v_shift = variance_function(ensemble(F + np.array(shift))).values
    assert np.all(v >= 0)
    np.testing.assert_allclose(v_shift, v, atol=1e-10 * max(1.0, np.abs(F).max() ** 2))


def test_partitions():
    assert preset_partition(1979, 37, "decades").sizes == (13, 12, 12)
    assert preset_partition(1979, 37, "decades").blocks[0] == (1979, 1991)
    assert preset_partition(1979, 37, "t2").sizes == (18, 19)
    assert preset_partition(1979, 37, "t2").blocks == ((1979, 1996), (1997, 2015))
    assert preset_partition(1979, 37, "t3-bands").sizes == (12, 11, 14)
    assert preset_partition(1979, 37, "t4").sizes == (9, 9, 9, 10)
    assert preset_partition(1979, 37, "t5").sizes == (7, 7, 7, 8, 8)
    assert preset_partition(1979, 37, "t1").sizes == (37,)
    with pytest.raises(ValueError):
        preset_partition(1979, 36, "t3-bands")
    with pytest.raises(ValueError):
        preset_partition(1979, 37, "nope")
    with pytest.raises(ValueError):
        BlockPartition(((1979, 1990), (1992, 2000)))
    assert even_sizes(10, 3) == [3, 3, 4]


def test_group_by_blocks_and_weighted_means():
    rng = np.random.default_rng(1)
    ens = ensemble(rng.normal(0, 3, (37, 7)))
    for name in ("t1", "t2", "decades", "t3-bands", "t4", "t5"):
        part = preset_partition(1979, 37, name)
        blocks = group_by_blocks(ens, part)
        assert tuple(len(b) for b in blocks) == part.sizes
        weighted = sum(len(b) * mean_function(b).values for b in blocks) / 37
        np.testing.assert_allclose(weighted, mean_function(ens).values, atol=1e-10)
    assert group_by_blocks(ens, preset_partition(1979, 37, "t1"))[0].years == ens.years
    with pytest.raises(ValueError):
        group_by_blocks(ens, preset_partition(1980, 36, "t2"))


def test_extrema_of_cosine():
    grid = np.arange(1, 366)
    f = GridFunction(grid, np.cos(2 * math.pi * grid / 365))
    e = extrema_summary(f)
    # brute-force scan of the grid
    assert e.max_day == grid[np.argmax(f.values)] == 365
    assert e.min_day in (182, 183)
    assert e.max_day_window == (363, 365)
    assert e.min_day_window == (e.min_day - 2, e.min_day + 2)
    assert e.min_value <= e.mean_level <= e.max_value


def test_extrema_constant_and_ties():
    f = GridFunction(np.arange(1, 11), np.full(10, 4.0))
    e = extrema_summary(f)
    assert e.min_value == e.max_value == e.mean_level == 4.0
    assert e.min_day == e.max_day == 1


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_extrema_agree_with_scan(values):
    grid = np.arange(1, len(values) + 1)
    e = extrema_summary(GridFunction(grid, values))
    lo = min(values)
    hi = max(values)
    assert e.min_value == lo and e.max_value == hi
    assert e.min_day == grid[values.index(lo)] and e.max_day == grid[values.index(hi)]


def test_grid_function_csv_roundtrip():
    f = GridFunction(np.arange(1, 6), [0.1, 0.2, 1 / 3, 4.0, -5.5], "decade 1")
    g = GridFunction.from_csv(f.to_csv())
    assert g.label == "decade 1"
    np.testing.assert_array_equal(g.values, f.values)
    np.testing.assert_array_equal(g.grid, f.grid)
