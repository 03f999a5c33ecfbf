"""Pointwise summaries of curve ensembles: mean, variance, blocks, extrema."""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .smoother import CurveEnsemble


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.label or 'grid function'}: values must be finite")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def to_csv(self) -> str:
        out = io.StringIO(newline="")
        out.write(f"# label: {self.label}\n")
        out.write("day,value\n")
        for d, v in zip(self.grid, self.values):
            out.write(f"{_fmt(d)},{_fmt(v)}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GridFunction":
        label = ""
        rows = []
        for line in text.splitlines():
            if line.startswith("# label:"):
                label = line[len("# label:"):].strip()
            elif line and not line.startswith("#") and not line.startswith("day,"):
                d, v = line.split(",")
                rows.append((float(d), float(v)))
        arr = np.array(rows, dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], label)


def _fmt(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


def _check_same_grid(a: GridFunction, b: GridFunction):
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise ValueError(f"grid mismatch between {a.label!r} and {b.label!r}")


def mean_function(ensemble: CurveEnsemble, label: str = "mean") -> GridFunction:
    if len(ensemble) == 0:
        raise ValueError("mean of an empty ensemble")
    return GridFunction(ensemble.grid, ensemble.values().mean(axis=0), label)


def variance_function(ensemble: CurveEnsemble, label: str = "variance") -> GridFunction:
    """Pointwise sample variance (divisor ``N - 1``)."""
    if len(ensemble) < 2:
        raise ValueError(f"variance needs at least 2 curves, got {len(ensemble)}")
    return GridFunction(ensemble.grid, ensemble.values().var(axis=0, ddof=1), label)


def mean_difference(a: GridFunction, b: GridFunction, label: str | None = None) -> GridFunction:
    _check_same_grid(a, b)
    return GridFunction(a.grid, a.values - b.values, label or f"{a.label} - {b.label}")


@dataclass(frozen=True)
class BlockPartition:
    """Contiguous, non-overlapping inclusive year ranges."""

    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        blocks = tuple((int(a), int(b)) for a, b in self.blocks)
        if not blocks:
            raise ValueError("partition needs at least one block")
        for a, b in blocks:
            if b < a:
                raise ValueError(f"block {a}-{b} is empty")
        for (_, b), (a, _) in zip(blocks, blocks[1:]):
            if a != b + 1:
                raise ValueError(f"blocks must be contiguous: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_sizes(cls, first_year: int, sizes: Sequence[int]) -> "BlockPartition":
        blocks, start = [], first_year
        for n in sizes:
            blocks.append((start, start + n - 1))
            start += n
        return cls(tuple(blocks))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in self.blocks)

    @property
    def span(self) -> tuple[int, int]:
        return self.blocks[0][0], self.blocks[-1][1]

    def labels(self) -> list[str]:
        return [f"{a}-{b}" for a, b in self.blocks]


def even_sizes(n_years: int, t: int, remainder_first: bool = False) -> list[int]:
    """Split ``n_years`` into ``t`` nearly equal sizes.

    Leftover years go to the last blocks, or the first ones when
    ``remainder_first`` is set.
    """
    if not 1 <= t <= n_years:
        raise ValueError(f"cannot split {n_years} years into {t} blocks")
    base, extra = divmod(n_years, t)
    sizes = [base] * t
    idx = range(extra) if remainder_first else range(t - extra, t)
    for i in idx:
        sizes[i] += 1
    return sizes


# Named presets. "decades" is the three-way split used for the mean/variance
# figures; "t3-bands" is the uneven split used for the three-block bands.
PRESETS = ("t1", "t2", "t3", "t4", "t5", "decades", "t3-bands")


def preset_partition(first_year: int, n_years: int, name: str) -> BlockPartition:
    if name == "decades":
        return BlockPartition.from_sizes(first_year, even_sizes(n_years, 3, remainder_first=True))
    if name == "t3-bands":
        if n_years != 37:
            raise ValueError("the t3-bands preset is defined for 37 years only")
        return BlockPartition.from_sizes(first_year, (12, 11, 14))
    if name.startswith("t") and name[1:].isdigit():
        return BlockPartition.from_sizes(first_year, even_sizes(n_years, int(name[1:])))
    raise ValueError(f"unknown partition preset {name!r}; known: {PRESETS}")


def group_by_blocks(ensemble: CurveEnsemble, partition: BlockPartition) -> list[CurveEnsemble]:
    years = ensemble.years
    if partition.span != (years[0], years[-1]):
        raise ValueError(f"partition {partition.span} does not cover ensemble years "
                         f"{years[0]}-{years[-1]}")
    out = []
    for a, b in partition.blocks:
        out.append(ensemble.subset([y for y in years if a <= y <= b]))
    return out


@dataclass(frozen=True)
class ExtremaSummary:
    min_value: float
    max_value: float
    min_day_window: tuple[float, float]
    max_day_window: tuple[float, float]
    mean_level: float
    min_day: float
    max_day: float


def extrema_summary(f: GridFunction, window_radius: int = 2,
                    domain: tuple[int, int] = (1, 365)) -> ExtremaSummary:
    """Grid argmin/argmax (first occurrence wins) with a +-radius day window."""
    if len(f) == 0:
        raise ValueError("extrema of an empty function")
    i_min = int(np.argmin(f.values))
    i_max = int(np.argmax(f.values))

    def window(day):
        return (max(domain[0], day - window_radius), min(domain[1], day + window_radius))

    return ExtremaSummary(
        min_value=float(f.values[i_min]),
        max_value=float(f.values[i_max]),
        min_day_window=window(float(f.grid[i_min])),
        max_day_window=window(float(f.grid[i_max])),
        mean_level=float(f.values.mean()),
        min_day=float(f.grid[i_min]),
        max_day=float(f.grid[i_max]),
    )
