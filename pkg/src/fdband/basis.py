"""Odd-size Fourier basis with closed-form derivatives.

Index convention (1-based, as used throughout the package)::

    k = 1         1
    k even        sin(k/2 * omega * t)
    k odd, k > 1  cos((k-1)/2 * omega * t)
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_PERIOD = 365.0
DEFAULT_OMEGA = 2 * math.pi / DEFAULT_PERIOD
MAX_DERIV = 2


@dataclass(frozen=True)
class FourierBasis:
    """``p`` Fourier functions of angular frequency ``omega`` (radians/day)."""

    p: int
    omega: float = DEFAULT_OMEGA

    def __post_init__(self):
        if isinstance(self.p, bool) or int(self.p) != self.p or self.p < 1 or self.p % 2 == 0:
            raise ValueError(f"number of basis functions must be a positive odd integer, got {self.p}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "omega", float(self.omega))

    @classmethod
    def with_period(cls, p: int, period: float = DEFAULT_PERIOD) -> "FourierBasis":
        return cls(p, 2 * math.pi / period)

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def harmonics(self) -> np.ndarray:
        """Harmonic number of each basis function (0 for the constant)."""
        k = np.arange(1, self.p + 1)
        return k // 2

    def eval(self, t: float, k: int, deriv: int = 0) -> float:
        return eval_basis(self, t, k, deriv)

    def design_matrix(self, grid, deriv: int = 0) -> np.ndarray:
        return design_matrix(self, grid, deriv)


def _check_deriv(deriv):
    if deriv not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {deriv!r}")


def eval_basis(basis: FourierBasis, t: float, k: int, deriv: int = 0) -> float:
    """Value of the ``deriv``-th derivative of basis function ``k`` at ``t``."""
    _check_deriv(deriv)
    if not 1 <= k <= basis.p:
        raise IndexError(f"basis index {k} outside 1..{basis.p}")
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t}")
    if k == 1:
        return 1.0 if deriv == 0 else 0.0
    m = (k // 2) * basis.omega
    x = m * t
    if k % 2 == 0:
        return (math.sin(x), m * math.cos(x), -m * m * math.sin(x))[deriv]
    return (math.cos(x), -m * math.sin(x), -m * m * math.cos(x))[deriv]


def design_matrix(basis: FourierBasis, grid, deriv: int = 0) -> np.ndarray:
    """Matrix with entry ``(j, k-1) = phi_k^(deriv)(grid[j])``."""
    _check_deriv(deriv)
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence of days")
    if not np.all(np.isfinite(t)):
        raise ValueError("grid entries must be finite")
    X = np.empty((t.size, basis.p))
    X[:, 0] = 1.0 if deriv == 0 else 0.0
    for h in range(1, basis.p // 2 + 1):
        m = h * basis.omega
        s, c = np.sin(m * t), np.cos(m * t)
        if deriv == 0:
            X[:, 2 * h - 1], X[:, 2 * h] = s, c
        elif deriv == 1:
            X[:, 2 * h - 1], X[:, 2 * h] = m * c, -m * s
        else:
            X[:, 2 * h - 1], X[:, 2 * h] = -m * m * s, -m * m * c
    return X
