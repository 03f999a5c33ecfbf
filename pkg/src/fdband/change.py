"""Relative change of a later block mean against a baseline block mean."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .stats import GridFunction, _check_same_grid, _fmt

DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True, eq=False)
class ChangeCurve:
    """``(target - baseline) / baseline`` per day; NaN where undefined."""

    grid: np.ndarray
    values: np.ndarray
    baseline_label: str = ""
    target_label: str = ""

    @property
    def defined(self) -> np.ndarray:
        return np.isfinite(self.values)

    def as_percent(self) -> np.ndarray:
        return 100.0 * self.values

    def to_csv(self, percent: bool = False) -> str:
        out = io.StringIO(newline="")
        out.write(f"# baseline: {self.baseline_label}\n")
        out.write(f"# target: {self.target_label}\n")
        col = "change_percent" if percent else "change_fraction"
        out.write(f"day,{col}\n")
        vals = self.as_percent() if percent else self.values
        for d, v in zip(self.grid, vals):
            out.write(f"{_fmt(d)},{'NA' if not np.isfinite(v) else _fmt(v)}\n")
        return out.getvalue()


def percentage_change(baseline: GridFunction, target: GridFunction,
                      epsilon: float = DEFAULT_EPSILON) -> ChangeCurve:
    """Pointwise relative change, flagging days where ``|baseline| <= epsilon``."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    _check_same_grid(baseline, target)
    b = baseline.values
    ok = np.abs(b) > epsilon
    values = np.full(b.shape, np.nan)
    values[ok] = (target.values[ok] - b[ok]) / b[ok]
    return ChangeCurve(baseline.grid.copy(), values, baseline.label, target.label)
