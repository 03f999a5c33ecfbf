"""Percentile bootstrap bands for a block mean function.

Random streams
--------------
Every replicate draws from its own PCG64 generator seeded by
``SeedSequence(seed, spawn_key=(*stream, replicate))`` where ``stream`` is
an integer or tuple naming the block (the pipeline uses
``(region, partition, block)``). Replicate ``r`` of a block therefore sees the
same numbers whichever worker computes it and in whatever order blocks are
processed, so results depend only on ``(seed, stream, B)``.

Quantiles use linear interpolation between order statistics
(``numpy.quantile(..., method="linear")``).
"""
from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .smoother import CurveEnsemble
from .stats import GridFunction, _check_same_grid, _fmt

DEFAULT_B = 5000
DEFAULT_LEVEL = 0.95
DEFAULT_SEED = 20160601
_CHUNK = 250


def _key(stream) -> tuple[int, ...]:
    return tuple(int(s) for s in (stream if isinstance(stream, (tuple, list)) else (stream,)))


def replicate_generator(seed: int, stream, replicate: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(*_key(stream), replicate))
    return np.random.Generator(np.random.PCG64(ss))


def resample_indices(n: int, b_samples: int, seed: int, stream=0,
                     start: int = 0) -> np.ndarray:
    """Resampling indices for replicates ``start .. start + b_samples - 1``."""
    out = np.empty((b_samples, n), dtype=np.intp)
    for i in range(b_samples):
        out[i] = replicate_generator(seed, stream, start + i).integers(0, n, size=n)
    return out


def bootstrap_means(block: CurveEnsemble, b_samples: int = DEFAULT_B, seed: int = DEFAULT_SEED,
                    stream=0, workers: int = 1) -> np.ndarray:
    """The ``(B, len(grid))`` matrix of resampled block mean functions."""
    if len(block) == 0:
        raise ValueError("cannot bootstrap an empty block")
    if int(b_samples) != b_samples or b_samples < 1:
        raise ValueError(f"b_samples must be a positive integer, got {b_samples}")
    values = block.values()
    n = values.shape[0]
    means = np.empty((b_samples, values.shape[1]))

    def run(start):
        stop = min(start + _CHUNK, b_samples)
        idx = resample_indices(n, stop - start, seed, stream, start)
        # per-replicate reduction over axis 1 is independent of chunking
        means[start:stop] = values[idx].mean(axis=1)

    starts = range(0, b_samples, _CHUNK)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(run, starts))
    else:
        for s in starts:
            run(s)
    return means


@dataclass(frozen=True, eq=False)
class ConfidenceBand:
    grid: np.ndarray
    lower: np.ndarray
    center: np.ndarray
    upper: np.ndarray
    level: float
    b_samples: int
    seed: int
    label: str = ""
    years: tuple[int, int] | None = None

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        arrays = [np.array(getattr(self, k), dtype=float) for k in ("grid", "lower", "center", "upper")]
        if len({a.shape for a in arrays}) != 1 or arrays[0].ndim != 1:
            raise ValueError("band arrays must be 1-d and equally long")
        for k, a in zip(("grid", "lower", "center", "upper"), arrays):
            a.setflags(write=False)
            object.__setattr__(self, k, a)

    def to_csv(self) -> str:
        out = io.StringIO(newline="")
        out.write(f"# label: {self.label}\n")
        out.write(f"# level: {self.level!r}\n")
        out.write(f"# b_samples: {self.b_samples}\n")
        out.write(f"# seed: {self.seed}\n")
        if self.years is not None:
            out.write(f"# block_years: {self.years[0]}-{self.years[1]}\n")
        out.write("day,lower,center,upper\n")
        for row in zip(self.grid, self.lower, self.center, self.upper):
            out.write(",".join(_fmt(v) for v in row) + "\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ConfidenceBand":
        meta, rows = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                meta[key.strip()] = value.strip()
            elif line and not line.startswith("day,"):
                rows.append([float(v) for v in line.split(",")])
        arr = np.array(rows, dtype=float).reshape(-1, 4)
        years = None
        if "block_years" in meta:
            a, b = meta["block_years"].split("-")
            years = (int(a), int(b))
        return cls(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], float(meta["level"]),
                   int(meta["b_samples"]), int(meta["seed"]), meta.get("label", ""), years)


def _band_from_means(means, block, level, b_samples, seed, label) -> ConfidenceBand:
    alpha = (1 - level) / 2
    lower, upper = np.quantile(means, [alpha, 1 - alpha], axis=0, method="linear")
    # clip guards against last-ulp inversions when all replicates coincide
    center = np.clip(means.mean(axis=0), lower, upper)
    return ConfidenceBand(block.grid, lower, center, upper, level, int(b_samples), seed,
                          label or f"{block.years[0]}-{block.years[-1]}",
                          (block.years[0], block.years[-1]))


def _variance_from_means(means, block) -> GridFunction:
    var = means.var(axis=0, ddof=1) if means.shape[0] > 1 else np.zeros(means.shape[1])
    return GridFunction(block.grid, var, f"bootstrap variance {block.years[0]}-{block.years[-1]}")


def _check_level(level):
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0, 1), got {level}")


def bootstrap_band(block: CurveEnsemble, b_samples: int = DEFAULT_B, level: float = DEFAULT_LEVEL,
                   seed: int = DEFAULT_SEED, stream=0, workers: int = 1,
                   label: str = "") -> ConfidenceBand:
    """Pointwise percentile band of the resampled block mean functions.

    ``center`` is the mean of the ``B`` bootstrap means; ``lower``/``upper``
    are their ``(1 - level)/2`` and ``(1 + level)/2`` quantiles.
    """
    _check_level(level)
    means = bootstrap_means(block, b_samples, seed, stream, workers)
    return _band_from_means(means, block, level, b_samples, seed, label)


def bootstrap_variance(block: CurveEnsemble, b_samples: int = DEFAULT_B, seed: int = DEFAULT_SEED,
                       stream=0, workers: int = 1) -> GridFunction:
    """Pointwise sample variance of the resampled block mean functions."""
    return _variance_from_means(bootstrap_means(block, b_samples, seed, stream, workers), block)


def bootstrap_summary(block: CurveEnsemble, b_samples: int = DEFAULT_B, level: float = DEFAULT_LEVEL,
                      seed: int = DEFAULT_SEED, stream=0, workers: int = 1,
                      label: str = "") -> tuple[ConfidenceBand, GridFunction]:
    """Band and bootstrap variance from a single set of replicates."""
    _check_level(level)
    means = bootstrap_means(block, b_samples, seed, stream, workers)
    return (_band_from_means(means, block, level, b_samples, seed, label),
            _variance_from_means(means, block))


def band_overlap(a: ConfidenceBand, b: ConfidenceBand) -> GridFunction:
    """Signed per-day overlap of two bands.

    ``min(upper) - max(lower)``: positive is the length of the shared
    interval, negative is the size of the gap between disjoint intervals.
    """
    if a.level != b.level:
        raise ValueError(f"bands have different levels ({a.level} vs {b.level})")
    _check_same_grid(GridFunction(a.grid, a.center), GridFunction(b.grid, b.center))
    values = np.minimum(a.upper, b.upper) - np.maximum(a.lower, b.lower)
    return GridFunction(a.grid, values, f"overlap {a.label} / {b.label}")
