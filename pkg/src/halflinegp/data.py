"""Dataset ingestion, gridded train/test splitting, and synthetic fields.

CSV schema (exactly): header line ``lon,lat,day,value``, one observation per
row, ``day`` a nonnegative integer, ``.`` decimal point, UTF-8.  Rows may
come in any order; ingest sorts canonically by (day, lat, lon).  Days must
form a contiguous integer range; time coordinates are days since the first
observed day, so ``t = 0`` is the first day.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .gp import Dataset
from .spacetime import SpaceTimePoint

__all__ = ["GridSpec", "SplitSpec", "CsvFormatError", "GridError",
           "load_csv", "write_csv", "split_by_day", "synthesize"]

CSV_HEADER = ("lon", "lat", "day", "value")


class CsvFormatError(ValueError):
    """Malformed CSV content; the message carries the offending line number."""


class GridError(ValueError):
    """Data does not form the expected rectangular lon/lat/day grid."""


@dataclass(frozen=True)
class GridSpec:
    """Regular lon/lat grid observed daily."""

    lon_count: int
    lat_count: int
    lon0: float
    lat0: float
    step: float
    day_count: int

    def __post_init__(self):
        for name in ("lon_count", "lat_count", "day_count"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not math.isfinite(self.step) or self.step <= 0.0:
            raise ValueError(f"step must be finite and > 0, got {self.step!r}")
        if not (math.isfinite(self.lon0) and math.isfinite(self.lat0)):
            raise ValueError("grid origin must be finite")

    @property
    def points_per_day(self) -> int:
        return self.lon_count * self.lat_count

    def lons(self) -> np.ndarray:
        return self.lon0 + self.step * np.arange(self.lon_count)

    def lats(self) -> np.ndarray:
        return self.lat0 + self.step * np.arange(self.lat_count)


@dataclass(frozen=True)
class SplitSpec:
    """Leading-days / trailing-days split of a gridded dataset."""

    train_days: int
    test_days: int

    def __post_init__(self):
        for name in ("train_days", "test_days"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")


def _infer_axis(values: np.ndarray, name: str) -> tuple[float, float, int]:
    """Origin, step and count of one sorted coordinate axis."""
    if len(values) == 1:
        return float(values[0]), 0.0, 1
    steps = np.diff(values)
    step = float(steps[0])
    if step <= 0 or not np.allclose(steps, step, rtol=1e-9, atol=1e-12):
        raise GridError(f"{name} coordinates are not uniformly spaced")
    return float(values[0]), step, len(values)


def load_csv(path) -> tuple[GridSpec, Dataset]:
    """Read a gridded dataset, inferring its :class:`GridSpec`.

    Raises
    ------
    CsvFormatError
        On malformed rows (message names the line number).
    GridError
        If the rows do not fill a rectangular lon x lat x day grid, spacing
        is non-uniform, or days are negative / non-contiguous.
    """
    rows: dict[tuple[int, float, float], float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise CsvFormatError(
                f"line 1: expected header {','.join(CSV_HEADER)!r}, got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise CsvFormatError(f"line {lineno}: expected 4 fields, got {len(row)}")
            try:
                lon = float(row[0])
                lat = float(row[1])
                day = int(row[2])
                value = float(row[3])
            except ValueError as exc:
                raise CsvFormatError(f"line {lineno}: {exc}") from None
            if not all(math.isfinite(v) for v in (lon, lat, value)):
                raise CsvFormatError(f"line {lineno}: non-finite field")
            if day < 0:
                raise CsvFormatError(f"line {lineno}: negative day {day}")
            key = (day, lat, lon)
            if key in rows:
                raise GridError(f"duplicate observation for day={day} lat={lat} lon={lon}")
            rows[key] = value
    if not rows:
        raise CsvFormatError("line 2: file contains no observations")

    days = sorted({k[0] for k in rows})
    lats = np.array(sorted({k[1] for k in rows}))
    lons = np.array(sorted({k[2] for k in rows}))
    if days != list(range(days[0], days[0] + len(days))):
        raise GridError(f"days must form a contiguous integer range, got {days}")
    if len(rows) != len(days) * len(lats) * len(lons):
        raise GridError(
            f"non-rectangular grid: {len(rows)} rows cannot fill "
            f"{len(lons)} lons x {len(lats)} lats x {len(days)} days")
    lon0, lon_step, lon_count = _infer_axis(lons, "lon")
    lat0, lat_step, lat_count = _infer_axis(lats, "lat")
    step = lon_step or lat_step
    if lon_step and lat_step and not math.isclose(lon_step, lat_step, rel_tol=1e-9):
        raise GridError(f"lon step {lon_step} differs from lat step {lat_step}")
    grid = GridSpec(lon_count=lon_count, lat_count=lat_count, lon0=lon0,
                    lat0=lat0, step=step or 1.0, day_count=len(days))

    day0 = days[0]
    points, values = [], []
    for day in days:
        for lat in lats:
            for lon in lons:
                key = (day, float(lat), float(lon))
                if key not in rows:
                    raise GridError(
                        f"non-rectangular grid: missing cell day={day} lat={lat} lon={lon}")
                points.append(SpaceTimePoint(x=(float(lon), float(lat)), t=float(day - day0)))
                values.append(rows[key])
    return grid, Dataset(points=tuple(points), values=tuple(values))


def write_csv(path, data: Dataset) -> None:
    """Write a dataset in the ingest schema (day = round(t))."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for p, v in zip(data.points, data.values):
            writer.writerow([repr(p.x[0]), repr(p.x[1]), int(round(p.t)), repr(v)])


def split_by_day(grid: GridSpec, data: Dataset, split: SplitSpec) -> tuple[Dataset, Dataset]:
    """Partition into the leading ``train_days`` and the remaining days.

    Order within each part follows the input dataset.
    """
    if split.train_days + split.test_days != grid.day_count:
        raise GridError(
            f"inconsistent split: {split.train_days} + {split.test_days} "
            f"!= {grid.day_count} days")
    if len(data) != grid.points_per_day * grid.day_count:
        raise GridError(
            f"dataset size {len(data)} does not match grid "
            f"{grid.points_per_day} x {grid.day_count}")
    train_pts, train_vals, test_pts, test_vals = [], [], [], []
    for p, v in zip(data.points, data.values):
        if p.t < split.train_days:
            train_pts.append(p)
            train_vals.append(v)
        else:
            test_pts.append(p)
            test_vals.append(v)
    expected_train = grid.points_per_day * split.train_days
    if len(train_pts) != expected_train:
        raise GridError(
            f"split produced {len(train_pts)} training points, expected {expected_train}")
    return (Dataset(points=tuple(train_pts), values=tuple(train_vals)),
            Dataset(points=tuple(test_pts), values=tuple(test_vals)))


def synthesize(grid: GridSpec, seed: int, sigma_noise: float = 0.1) -> Dataset:
    """Deterministic smooth space-time field standing in for real gridded data.

    ``value(lon, lat, day) = A sin(a lon + p1) cos(b lat + p2) + B day + C
    + noise`` with all constants drawn from a PCG64 generator seeded with
    ``seed`` (numpy's default bit generator; stable across platforms), then
    one Gaussian noise draw per point in canonical (day, lat, lon) order.
    The same ``(grid, seed, sigma_noise)`` always produces the same dataset.
    """
    if sigma_noise < 0.0 or not math.isfinite(sigma_noise):
        raise ValueError(f"sigma_noise must be finite and >= 0, got {sigma_noise!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    amp = rng.uniform(5.0, 15.0)
    freq_lon = rng.uniform(0.05, 0.35)
    freq_lat = rng.uniform(0.05, 0.35)
    phase_lon = rng.uniform(0.0, 2.0 * math.pi)
    phase_lat = rng.uniform(0.0, 2.0 * math.pi)
    trend = rng.uniform(0.2, 1.5)
    offset = rng.uniform(270.0, 290.0)

    lons, lats = grid.lons(), grid.lats()
    n = grid.points_per_day * grid.day_count
    noise = rng.normal(0.0, sigma_noise, size=n) if sigma_noise > 0 else np.zeros(n)
    points, values = [], []
    i = 0
    for day in range(grid.day_count):
        for lat in lats:
            for lon in lons:
                v = (amp * math.sin(freq_lon * lon + phase_lon)
                     * math.cos(freq_lat * lat + phase_lat)
                     + trend * day + offset + noise[i])
                points.append(SpaceTimePoint(x=(float(lon), float(lat)), t=float(day)))
                values.append(float(v))
                i += 1
    return Dataset(points=tuple(points), values=tuple(values))
