"""Least-squares Fourier smoothing of yearly series and basis-count selection."""
from __future__ import annotations

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .basis import DEFAULT_PERIOD, FourierBasis, design_matrix
from .ingest import DAYS_PER_YEAR, Dataset, RawYearSeries

log = logging.getLogger(__name__)

DEFAULT_P_VALUES = tuple(range(1, 52, 2))
DEFAULT_FLATNESS_TOL = 0.01
DEFAULT_GRID = np.arange(1, DAYS_PER_YEAR + 1, dtype=float)


class FitError(ValueError):
    pass


class UnderdeterminedFitError(FitError):
    pass


class RankError(FitError):
    pass


class BasisSelectionWarning(UserWarning):
    """The flatness rule found no basis count before the last one tried."""


@dataclass(frozen=True, eq=False)
class FourierCurve:
    basis: FourierBasis
    coeffs: np.ndarray
    year: int | None = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (self.basis.p,):
            raise ValueError(f"expected {self.basis.p} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, t, deriv: int = 0):
        scalar = np.ndim(t) == 0
        out = design_matrix(self.basis, np.atleast_1d(t), deriv) @ self.coeffs
        return float(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class CurveEnsemble:
    """Yearly curves sharing one basis, stored as an ``(N, p)`` coefficient matrix."""

    basis: FourierBasis
    coeffs: np.ndarray
    years: tuple[int, ...]
    grid: np.ndarray = field(default_factory=lambda: DEFAULT_GRID.copy())

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1, self.basis.p)
        years = tuple(int(y) for y in self.years)
        if len(years) != c.shape[0]:
            raise ValueError("one year label per curve required")
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError("years must be strictly increasing")
        grid = np.array(self.grid, dtype=float)
        c.setflags(write=False)
        grid.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_curves(cls, curves: Sequence[FourierCurve], grid=None) -> "CurveEnsemble":
        if not curves:
            raise ValueError("cannot build an ensemble from no curves")
        basis = curves[0].basis
        if any(c.basis != basis for c in curves):
            raise ValueError("all curves must share the same basis")
        kw = {} if grid is None else {"grid": grid}
        return cls(basis, np.vstack([c.coeffs for c in curves]),
                   tuple(c.year for c in curves), **kw)

    def __len__(self):
        return self.coeffs.shape[0]

    @property
    def curves(self) -> list[FourierCurve]:
        return [FourierCurve(self.basis, c, y) for c, y in zip(self.coeffs, self.years)]

    def values(self, deriv: int = 0) -> np.ndarray:
        """Curve values on the grid, shape ``(N, len(grid))``."""
        return self.coeffs @ design_matrix(self.basis, self.grid, deriv).T

    def subset(self, years: Sequence[int]) -> "CurveEnsemble":
        idx = [self.years.index(y) for y in years]
        return CurveEnsemble(self.basis, self.coeffs[idx], tuple(years), self.grid)

    def mean_curve(self, label=None) -> FourierCurve:
        """Coefficient-wise mean, i.e. the pointwise mean as a Fourier curve."""
        if len(self) == 0:
            raise ValueError("empty ensemble")
        return FourierCurve(self.basis, self.coeffs.mean(axis=0), label)


def _weighted_system(series: RawYearSeries, basis: FourierBasis, weights):
    X = design_matrix(basis, series.days)
    y = series.area
    if weights is None:
        return X, y
    w = np.asarray(weights, dtype=float)
    if w.shape != y.shape:
        raise ValueError(f"expected {y.size} weights, got {w.size}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValueError("weights must be positive and finite")
    # scaling by the max keeps equal weights exactly at 1.0
    sw = np.sqrt(w / w.max())
    return X * sw[:, None], y * sw


def fit_year(series: RawYearSeries, basis: FourierBasis, weights=None) -> FourierCurve:
    """Least-squares Fourier fit of one year, solved by Householder QR.

    Minimizes ``sum_j w_j (y_j - x(t_j))**2`` with uniform weights by default.
    """
    if series.n < basis.p:
        raise UnderdeterminedFitError(
            f"year {series.year}: {series.n} samples cannot determine {basis.p} coefficients")
    X, y = _weighted_system(series, basis, weights)
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if diag.min() <= diag.max() * max(X.shape) * np.finfo(float).eps:
        raise RankError(f"year {series.year}: design matrix is rank deficient for p={basis.p}")
    coeffs = solve_triangular(R, Q.T @ y, lower=False)
    return FourierCurve(basis, coeffs, series.year)


def residual_mse(series: RawYearSeries, curve: FourierCurve) -> float:
    """Mean squared residual of ``curve`` at the series' own sample days."""
    if series.n == 0:
        raise ValueError(f"year {series.year}: empty series")
    resid = series.area - curve(series.days.astype(float))
    return float(np.mean(resid * resid))


def smooth_dataset(dataset: Dataset, basis: FourierBasis, grid=None, workers: int = 1) -> CurveEnsemble:
    """Fit every year of ``dataset`` and collect the curves in an ensemble."""
    def fit(series):
        try:
            return fit_year(series, basis)
        except FitError as exc:
            raise type(exc)(f"{exc} (region {dataset.region})") from exc

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            curves = list(pool.map(fit, dataset.years))
    else:
        curves = [fit(s) for s in dataset.years]
    return CurveEnsemble.from_curves(curves, grid)


@dataclass(frozen=True)
class MseProfile:
    p_values: tuple[int, ...]
    mse_hat: tuple[float, ...]
    years_used: tuple[int, ...] = ()

    def __post_init__(self):
        p = tuple(int(v) for v in self.p_values)
        if len(p) != len(self.mse_hat):
            raise ValueError("p_values and mse_hat differ in length")
        if any(v % 2 == 0 for v in p) or any(b <= a for a, b in zip(p, p[1:])):
            raise ValueError("p_values must be strictly increasing odd integers")
        object.__setattr__(self, "p_values", p)
        object.__setattr__(self, "mse_hat", tuple(float(v) for v in self.mse_hat))
        object.__setattr__(self, "years_used", tuple(self.years_used))

    @property
    def first_diff(self) -> tuple[float, ...]:
        m = self.mse_hat
        return tuple(b - a for a, b in zip(m, m[1:]))


def mse_profile(dataset: Dataset, p_values: Sequence[int] = DEFAULT_P_VALUES,
                basis_period: float = DEFAULT_PERIOD, workers: int = 1) -> MseProfile:
    """Average per-year residual MSE for each candidate basis count.

    Years with fewer samples than the largest ``p`` are left out of every
    entry (with a warning) so all entries average over the same years.
    """
    p_values = tuple(int(p) for p in p_values)
    if not p_values:
        raise ValueError("p_values is empty")
    p_max = max(p_values)
    usable = [s for s in dataset.years if s.n >= p_max]
    skipped = [s.year for s in dataset.years if s.n < p_max]
    if skipped:
        warnings.warn(f"{dataset.region}: years {skipped} have fewer than {p_max} samples and are excluded",
                      stacklevel=2)
    if not usable:
        raise UnderdeterminedFitError(f"{dataset.region}: no year has {p_max} samples")

    widest = FourierBasis.with_period(p_max, basis_period)

    def year_mses(series):
        # One QR of the widest design serves every p: the spans are nested, so
        # the residual sum of squares for p is the full residual plus the
        # squared tail of Q^T y beyond the first p columns.
        X = design_matrix(widest, series.days)
        Q, R = np.linalg.qr(X, mode="reduced")
        z = Q.T @ series.area
        rss_full = float(np.sum((series.area - Q @ z) ** 2))
        tail = np.concatenate([np.cumsum((z * z)[::-1])[::-1], [0.0]])
        diag = np.abs(np.diag(R))
        eps = max(X.shape) * np.finfo(float).eps
        out = []
        for p in p_values:
            if diag[:p].min() <= diag[:p].max() * eps:
                raise RankError(f"design matrix is rank deficient (year {series.year}, p={p})")
            out.append((rss_full + tail[p]) / series.n)
        return out

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            per_year = list(pool.map(year_mses, usable))
    else:
        per_year = [year_mses(s) for s in usable]
    per_p = list(zip(*per_year))
    # fixed year order keeps the average independent of scheduling
    mse_hat = [sum(m) / len(m) for m in per_p]
    return MseProfile(p_values, mse_hat, tuple(s.year for s in usable))


def select_basis_count(profile: MseProfile, flatness_tol: float = DEFAULT_FLATNESS_TOL) -> int:
    """Smallest ``p`` after which the MSE curve is flat.

    ``p_values[i]`` qualifies when every first difference from position ``i``
    onwards satisfies ``|diff| <= flatness_tol * mse_hat[i]``. If nothing
    before the last entry qualifies, the largest ``p`` is returned and a
    :class:`BasisSelectionWarning` is issued.
    """
    if len(profile.p_values) < 3:
        raise ValueError("basis selection needs at least 3 profile entries")
    diffs = np.abs(np.asarray(profile.first_diff))
    for i, p in enumerate(profile.p_values[:-1]):
        if np.all(diffs[i:] <= flatness_tol * profile.mse_hat[i]):
            return p
    warnings.warn(f"MSE profile never flattens within tolerance {flatness_tol}; "
                  f"using largest p={profile.p_values[-1]}", BasisSelectionWarning, stacklevel=2)
    return profile.p_values[-1]
