"""Reading daily sea-ice area series into per-year raw samples.

The canonical on-disk format is a three column CSV::

    year,day,area
    1979,1,14.997
    1979,2,NA

``day`` is the naive day of year (1-366). Feb 29 is dropped on read and the
remaining days of a leap year are shifted down by one, so every year lives on
the 365 day domain. Rows whose area is ``NA`` are simply absent from the
resulting series.
"""
from __future__ import annotations

import calendar
import csv
import datetime as dt
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .basis import FourierBasis

REGIONS = ("Arctic", "Antarctic")
DAYS_PER_YEAR = 365
MISSING = "NA"
CANONICAL_HEADER = ("year", "day", "area")


class IngestError(ValueError):
    """Raised for any problem reading or assembling a dataset."""


class ParseError(IngestError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateError(IngestError):
    pass


class EmptyDatasetError(IngestError):
    pass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RawYearSeries:
    """Observed (day, area) pairs for one calendar year, possibly sparse."""

    year: int
    days: np.ndarray
    area: np.ndarray

    def __post_init__(self):
        days = np.asarray(self.days, dtype=np.int64)
        area = np.asarray(self.area, dtype=float)
        if days.ndim != 1 or days.shape != area.shape:
            raise IngestError(f"{self.year}: days and area must be 1-d and equally long")
        if days.size and (days.min() < 1 or days.max() > DAYS_PER_YEAR):
            raise IngestError(f"{self.year}: day index outside 1..{DAYS_PER_YEAR}")
        if np.any(np.diff(days) <= 0):
            raise IngestError(f"{self.year}: days must be strictly increasing")
        if not np.all(np.isfinite(area)) or np.any(area < 0):
            raise IngestError(f"{self.year}: area values must be finite and non-negative")
        days.setflags(write=False)
        area.setflags(write=False)
        object.__setattr__(self, "days", days)
        object.__setattr__(self, "area", area)

    @property
    def n(self) -> int:
        return int(self.days.size)

    def __eq__(self, other):
        if not isinstance(other, RawYearSeries):
            return NotImplemented
        return (self.year == other.year
                and np.array_equal(self.days, other.days)
                and np.array_equal(self.area, other.area))

    __hash__ = None


@dataclass(frozen=True)
class Dataset:
    region: str
    years: tuple[RawYearSeries, ...]

    def __post_init__(self):
        if self.region not in REGIONS:
            raise IngestError(f"unknown region {self.region!r}; expected one of {REGIONS}")
        years = tuple(self.years)
        if not years:
            raise EmptyDatasetError("dataset has no years")
        labels = [s.year for s in years]
        if any(b != a + 1 for a, b in zip(labels, labels[1:])):
            raise IngestError(f"years must be contiguous and increasing, got {labels}")
        object.__setattr__(self, "years", years)

    @property
    def year_labels(self) -> list[int]:
        return [s.year for s in self.years]

    def __len__(self):
        return len(self.years)

    def __iter__(self):
        return iter(self.years)


def canonical_day(year: int, naive_day: int) -> int | None:
    """Map a naive day of year onto the 365 day domain.

    Returns ``None`` for Feb 29, which is dropped.
    """
    if calendar.isleap(year):
        if naive_day == 60:
            return None
        if naive_day > 60:
            return naive_day - 1
    return naive_day


def parse_canonical_csv(text: str | Iterable[str], region: str = "Arctic") -> Dataset:
    """Parse canonical ``year,day,area`` CSV into a :class:`Dataset`."""
    if isinstance(text, str):
        text = io.StringIO(text, newline="")
    reader = csv.reader(text)
    header = None
    samples: dict[int, dict[int, float]] = {}
    seen: set[tuple[int, int]] = set()
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if header is None:
            header = tuple(c.strip().lower().lstrip("﻿") for c in row)
            if header != CANONICAL_HEADER:
                raise ParseError(lineno, f"expected header {','.join(CANONICAL_HEADER)}, got {','.join(row)}")
            continue
        if len(row) != 3:
            raise ParseError(lineno, f"expected 3 columns, got {len(row)}")
        try:
            year = int(row[0])
            day = int(row[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer year/day {row[0]!r},{row[1]!r}") from None
        max_day = 366 if calendar.isleap(year) else 365
        if not 1 <= day <= max_day:
            raise ParseError(lineno, f"day {day} out of range 1..{max_day} for {year}")
        if (year, day) in seen:
            raise DuplicateError(f"line {lineno}: duplicate entry for year {year} day {day}")
        seen.add((year, day))
        raw = row[2].strip()
        if raw == MISSING:
            continue
        try:
            area = float(raw)
        except ValueError:
            raise ParseError(lineno, f"non-numeric area {raw!r}") from None
        if not math.isfinite(area) or area < 0:
            raise ParseError(lineno, f"area must be finite and non-negative, got {raw!r}")
        cday = canonical_day(year, day)
        if cday is None:
            continue
        samples.setdefault(year, {})[cday] = area
    if header is None or not seen:
        raise EmptyDatasetError("input contains no data rows")

    years = []
    for year in range(min(y for y, _ in seen), max(y for y, _ in seen) + 1):
        by_day = samples.get(year, {})
        days = sorted(by_day)
        years.append(RawYearSeries(year, np.array(days, dtype=np.int64),
                                   np.array([by_day[d] for d in days], dtype=float)))
    return Dataset(region, tuple(years))


def read_canonical_csv(path, region: str = "Arctic") -> Dataset:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_canonical_csv(fh, region=region)


def _naive_day(year: int, canonical: int) -> int:
    if calendar.isleap(year) and canonical >= 60:
        return canonical + 1
    return canonical


def serialize_canonical_csv(dataset: Dataset) -> str:
    """Write a dataset back to canonical CSV (observed rows only)."""
    out = io.StringIO(newline="")
    out.write(",".join(CANONICAL_HEADER) + "\n")
    for series in dataset.years:
        for day, area in zip(series.days, series.area):
            out.write(f"{series.year},{_naive_day(series.year, int(day))},{float(area)!r}\n")
    return out.getvalue()


def write_canonical_csv(dataset: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(serialize_canonical_csv(dataset))


def convert_nsidc(text: str | Iterable[str], column: str | None = None) -> str:
    """Convert an NSIDC sea-ice-index daily export to canonical CSV.

    The export has ``Year, Month, Day, <value>, Missing, Source Data`` columns
    and a units row under the header. ``column`` picks the value column;
    by default ``Area`` is used when present and ``Extent`` otherwise.
    Days absent from the export are written as ``NA`` for every day of each
    covered year.
    """
    if isinstance(text, str):
        text = io.StringIO(text, newline="")
    reader = csv.reader(text)
    header = None
    values: dict[tuple[int, int], float] = {}
    col = None
    for row in reader:
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        if header is None:
            header = [c.lower() for c in cells]
            for required in ("year", "month", "day"):
                if required not in header:
                    raise ParseError(reader.line_num, f"NSIDC header lacks {required!r} column")
            if column is not None:
                if column.lower() not in header:
                    raise ParseError(reader.line_num, f"NSIDC header lacks {column!r} column")
                col = header.index(column.lower())
            else:
                for name in ("area", "extent"):
                    if name in header:
                        col = header.index(name)
                        break
                else:
                    raise ParseError(reader.line_num, "NSIDC header has neither Area nor Extent")
            iy, im, iday = header.index("year"), header.index("month"), header.index("day")
            continue
        try:
            date = dt.date(int(cells[iy]), int(cells[im]), int(cells[iday]))
        except ValueError:
            # units row ("YYYY, MM, DD, 10^6 sq km, ...") and other non-data lines
            continue
        try:
            value = float(cells[col])
        except (ValueError, IndexError):
            raise ParseError(reader.line_num, f"non-numeric value {cells[col:col + 1]}") from None
        values[(date.year, date.timetuple().tm_yday)] = value
    if not values:
        raise EmptyDatasetError("NSIDC export contains no data rows")
    first = min(y for y, _ in values)
    last = max(y for y, _ in values)
    out = io.StringIO(newline="")
    out.write(",".join(CANONICAL_HEADER) + "\n")
    for year in range(first, last + 1):
        for day in range(1, (366 if calendar.isleap(year) else 365) + 1):
            v = values.get((year, day))
            out.write(f"{year},{day},{MISSING if v is None else repr(v)}\n")
    return out.getvalue()


@dataclass
class SyntheticConfig:
    """Ground truth for :func:`synthesize_ensemble`.

    ``coeffs`` is a Fourier coefficient vector (odd length); ``offsets`` holds
    one additive level shift per year and also fixes the number of years.
    """

    coeffs: Sequence[float]
    offsets: Sequence[float]
    noise_sd: float = 0.0
    seed: int = 0
    pattern: str = "daily"
    first_year: int = 1979
    region: str = "Arctic"
    omega: float = 2 * math.pi / DAYS_PER_YEAR
    pattern_years: Sequence[int] | None = field(default=None)


def sample_days(pattern: str) -> np.ndarray:
    if pattern == "daily":
        return np.arange(1, DAYS_PER_YEAR + 1)
    if pattern == "alternate":
        return np.arange(1, DAYS_PER_YEAR + 1, 2)
    raise ConfigError(f"unknown sampling pattern {pattern!r}")


def synthesize_ensemble(config: SyntheticConfig) -> Dataset:
    """Generate a dataset of noisy samples from a known Fourier curve.

    Each year is ``truth(day) + offset[year] + N(0, noise_sd**2)`` at the
    sampled days. ``pattern_years``, if given, lists the years sampled on
    alternate days; all others follow ``pattern``.
    """
    coeffs = np.asarray(config.coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size % 2 == 0:
        raise ConfigError(f"coefficient vector must have odd length, got {coeffs.size}")
    if not config.noise_sd >= 0:
        raise ConfigError(f"noise_sd must be non-negative, got {config.noise_sd}")
    if len(config.offsets) == 0:
        raise ConfigError("offsets must list at least one year")
    basis = FourierBasis(coeffs.size, config.omega)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    alternate = set(config.pattern_years or ())
    years = []
    for i, offset in enumerate(config.offsets):
        year = config.first_year + i
        days = sample_days("alternate" if year in alternate else config.pattern)
        clean = basis.design_matrix(days) @ coeffs + float(offset)
        noise = rng.standard_normal(days.size) * config.noise_sd
        years.append(RawYearSeries(year, days, clean + noise))
    return Dataset(config.region, tuple(years))


def sea_ice_like_config(region: str = "Arctic", n_years: int = 37, seed: int = 0,
                        noise_sd: float = 0.08, first_year: int = 1979) -> SyntheticConfig:
    """A synthetic configuration with a roughly sea-ice shaped annual cycle.

    The Arctic curve peaks in March and bottoms out in September with a
    declining level across years; the Antarctic curve is phase shifted by
    half a year with no trend. Years before 1988 are sampled on alternate days.
    """
    w = 2 * math.pi / DAYS_PER_YEAR
    if region == "Arctic":
        level, amp, peak, trend = 11.5, 4.6, 66.0, -0.05
        second = (0.35, 250.0)
    elif region == "Antarctic":
        level, amp, peak, trend = 11.8, 7.6, 262.0, 0.0
        second = (0.6, 20.0)
    else:
        raise ConfigError(f"unknown region {region!r}")
    coeffs = np.zeros(7)
    coeffs[0] = level
    # a*cos(w(t - peak)) = a cos(wpeak) cos(wt) + a sin(wpeak) sin(wt)
    coeffs[1] = amp * math.sin(w * peak)
    coeffs[2] = amp * math.cos(w * peak)
    coeffs[3] = second[0] * math.sin(2 * w * second[1])
    coeffs[4] = second[0] * math.cos(2 * w * second[1])
    rng = np.random.Generator(np.random.PCG64(seed + 7919))
    mid = (n_years - 1) / 2
    offsets = [trend * (i - mid) + 0.15 * rng.standard_normal() for i in range(n_years)]
    alt = [y for y in range(first_year, first_year + n_years) if y < 1988]
    return SyntheticConfig(coeffs=list(coeffs), offsets=offsets, noise_sd=noise_sd,
                           seed=seed, pattern="daily", first_year=first_year,
                           region=region, pattern_years=alt)
