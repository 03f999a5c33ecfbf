"""Velocity/acceleration of smooth curves and the phase-plane trajectories."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

from .smoother import DEFAULT_GRID, CurveEnsemble, FourierCurve
from .stats import _fmt

MONTH_STARTS = {
    "Jan": 1, "Feb": 32, "Mar": 60, "Apr": 91, "May": 121, "Jun": 152,
    "Jul": 182, "Aug": 213, "Sep": 244, "Oct": 274, "Nov": 305, "Dec": 335,
}


def _derivative_coeffs(coeffs: np.ndarray, omega: float) -> np.ndarray:
    # d/dt [a sin(mwt) + b cos(mwt)] = -b mw sin(mwt) + a mw cos(mwt)
    out = np.zeros_like(coeffs)
    m = np.arange(1, coeffs.size // 2 + 1) * omega
    a, b = coeffs[1::2], coeffs[2::2]
    out[1::2] = -b * m
    out[2::2] = a * m
    return out


def differentiate(curve: FourierCurve, order: int = 1) -> FourierCurve:
    """Exact derivative of a Fourier curve, as a curve on the same basis."""
    if order not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {order!r}")
    c = curve.coeffs
    if order == 1:
        c = _derivative_coeffs(c, curve.basis.omega)
    else:
        # second derivative in one step: each harmonic is scaled by -(mw)^2
        m = curve.basis.harmonics() * curve.basis.omega
        c = -(m * m) * c
    return FourierCurve(curve.basis, c, curve.year)


@dataclass(frozen=True, eq=False)
class PhaseCurve:
    grid: np.ndarray
    area: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    label: str = ""
    month_anchors: dict = field(default_factory=dict)

    def __post_init__(self):
        arrays = [np.array(getattr(self, k), dtype=float)
                  for k in ("grid", "area", "velocity", "acceleration")]
        if len({a.shape for a in arrays}) != 1:
            raise ValueError("phase curve series must share the grid")
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise ValueError("phase curve values must be finite")
        for k, a in zip(("grid", "area", "velocity", "acceleration"), arrays):
            a.setflags(write=False)
            object.__setattr__(self, k, a)

    def to_csv(self) -> str:
        out = io.StringIO(newline="")
        out.write(f"# label: {self.label}\n")
        out.write("day,area,velocity,acceleration\n")
        for row in zip(self.grid, self.area, self.velocity, self.acceleration):
            out.write(",".join(_fmt(v) for v in row) + "\n")
        return out.getvalue()

    def anchors_json(self) -> str:
        return json.dumps({"label": self.label, "month_anchors": self.month_anchors}, indent=2) + "\n"


def month_anchors(grid) -> dict[str, int]:
    """Grid index of the first day of each month (months whose start is on the grid)."""
    grid = np.asarray(grid, dtype=float)
    out = {}
    for name, day in MONTH_STARTS.items():
        hit = np.flatnonzero(grid == day)
        if hit.size:
            out[name] = int(hit[0])
    return out


def phase_curve(source: CurveEnsemble | FourierCurve, grid=None, label: str | None = None) -> PhaseCurve:
    """Area, velocity and acceleration of a block mean curve on ``grid``.

    An ensemble is reduced to its coefficient-wise mean first.
    """
    if isinstance(source, CurveEnsemble):
        if len(source) == 0:
            raise ValueError("empty block")
        if grid is None:
            grid = source.grid
        if label is None:
            label = f"{source.years[0]}-{source.years[-1]}"
        source = source.mean_curve()
    grid = DEFAULT_GRID if grid is None else np.asarray(grid, dtype=float)
    return PhaseCurve(grid, source(grid), source(grid, 1), source(grid, 2),
                      label or "", month_anchors(grid))


def zero_crossings(curve: FourierCurve, order: int = 1, grid=None, xtol: float = 1e-3) -> list[float]:
    """Days where the ``order``-th derivative changes sign.

    Sign changes between neighbouring grid points are refined by bisection
    to ``xtol`` days. Grid points where the derivative is exactly zero count
    only when the sign differs on either side.
    """
    deriv = differentiate(curve, order)
    grid = DEFAULT_GRID if grid is None else np.asarray(grid, dtype=float)
    vals = deriv(grid)
    scale = np.abs(deriv.coeffs).sum()
    if scale == 0:
        return []
    sign = np.sign(np.where(np.abs(vals) <= 1e-14 * scale, 0.0, vals))
    roots = []
    nz = np.flatnonzero(sign)
    for i, j in zip(nz, nz[1:]):
        if sign[i] == sign[j]:
            continue
        if j > i + 1:
            # derivative vanished on the grid in between
            roots.append(float(grid[(i + j) // 2]) if (j - i) % 2 == 0 else
                         float((grid[i + (j - i) // 2] + grid[i + (j - i + 1) // 2]) / 2))
            continue
        lo, hi = float(grid[i]), float(grid[j])
        f_lo = vals[i]
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            f_mid = deriv(mid)
            if f_mid == 0:
                lo = hi = mid
                break
            if np.sign(f_mid) == np.sign(f_lo):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots
