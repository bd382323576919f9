"""Per-index-point sample tables and the chronological train/test split.

A dataset is one index point's monthly record: an (M, 85) feature matrix,
an M-vector of precipitation totals, and M ``YYYY-MM`` timestamps sorted
strictly increasing. CSV files may hold several points at once; rows are
keyed by the ``lon``/``lat`` columns.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass

import numpy as np

from .catalog import FEATURE_NAMES, CATALOG_SIZE, IndexPoint
from .errors import (
    DuplicateTimestamp,
    EmptyDataset,
    FractionOutOfRange,
    MissingColumn,
    NonFiniteValue,
    UnknownColumn,
)

#: Exact CSV column order: date, coordinates, the 85 predictors, target.
CSV_COLUMNS = ("date", "lon", "lat", "elev") + FEATURE_NAMES + ("precip",)

_DATE_RE = re.compile(r"^(\d{4})-(\d{2})$")

CHRONOLOGICAL = "chronological"
SEEDED_RANDOM = "seeded_random"


@dataclass(frozen=True)
class Sample:
    """One month at one index point."""

    timestamp: str
    features: np.ndarray  # shape (85,), catalog order
    precip: float


@dataclass(frozen=True)
class SplitSpec:
    """How to carve a dataset into train and test portions.

    The test size is round-half-up of ``(1 - train_fraction) * M``, at
    least 1. Chronological mode holds out the most recent months; seeded
    random mode draws the held-out rows with a fixed seed, keeping both
    portions in time order.
    """

    train_fraction: float = 0.9
    mode: str = CHRONOLOGICAL
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise FractionOutOfRange(
                f"train_fraction must lie in (0, 1), got {self.train_fraction}"
            )
        if self.mode not in (CHRONOLOGICAL, SEEDED_RANDOM):
            raise ValueError(f"unknown split mode: {self.mode!r}")

    def test_count(self, n_samples: int) -> int:
        # round half-up; the 1e-9 nudge absorbs float artifacts like
        # (1 - 0.9) * 15 = 1.4999999999999998, which means exactly 1.5
        return max(1, math.floor((1.0 - self.train_fraction) * n_samples + 0.5 + 1e-9))


class Dataset:
    """Validated, chronologically sorted samples for one index point."""

    def __init__(self, point: IndexPoint, timestamps, features, precip):
        features = np.asarray(features, dtype=np.float64)
        precip = np.asarray(precip, dtype=np.float64)
        timestamps = tuple(timestamps)
        if features.ndim != 2 or features.shape[1] != CATALOG_SIZE:
            raise ValueError(
                f"feature matrix must be (M, {CATALOG_SIZE}), got {features.shape}"
            )
        if not (len(timestamps) == features.shape[0] == precip.shape[0]):
            raise ValueError("timestamps, features and precip must have equal length")
        if len(timestamps) == 0:
            raise EmptyDataset("dataset has no samples")

        keys = [_month_key(t) for t in timestamps]
        order = sorted(range(len(keys)), key=keys.__getitem__)
        for a, b in zip(order, order[1:]):
            if keys[a] == keys[b]:
                raise DuplicateTimestamp(timestamps[a])
        if order != list(range(len(keys))):
            timestamps = tuple(timestamps[i] for i in order)
            features = features[order]
            precip = precip[order]

        if not np.isfinite(features).all() or not np.isfinite(precip).all():
            raise ValueError("dataset contains non-finite values")
        if (precip < 0).any():
            raise ValueError("precipitation values must be nonnegative")

        self.point = point
        self.timestamps = timestamps
        self.features = features
        self.precip = precip
        self.features.setflags(write=False)
        self.precip.setflags(write=False)

    def __len__(self) -> int:
        return len(self.timestamps)

    def sample(self, i: int) -> Sample:
        return Sample(self.timestamps[i], self.features[i], float(self.precip[i]))

    def take(self, indices) -> "Dataset":
        """New dataset restricted to the given row indices (kept in order)."""
        indices = list(indices)
        return Dataset(
            self.point,
            [self.timestamps[i] for i in indices],
            self.features[indices],
            self.precip[indices],
        )


def _month_key(timestamp: str) -> int:
    m = _DATE_RE.match(timestamp)
    if not m or not 1 <= int(m.group(2)) <= 12:
        raise ValueError(f"timestamp must be YYYY-MM with a valid month: {timestamp!r}")
    return int(m.group(1)) * 12 + int(m.group(2)) - 1


def month_sequence(start: str, n: int) -> list[str]:
    """``n`` consecutive months beginning at ``start`` (YYYY-MM)."""
    key = _month_key(start)
    return [f"{k // 12:04d}-{k % 12 + 1:02d}" for k in range(key, key + n)]


def load_csv(path, point: IndexPoint) -> Dataset:
    """Load and validate one index point's rows from a catalog-schema CSV.

    The header must contain exactly the documented columns. Rows are
    matched to ``point`` by longitude and latitude (1e-6 tolerance).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty") from None

        expected = set(CSV_COLUMNS)
        seen = set(header)
        for name in CSV_COLUMNS:
            if name not in seen:
                raise MissingColumn(name)
        for name in header:
            if name not in expected:
                raise UnknownColumn(name)
        col = {name: header.index(name) for name in CSV_COLUMNS}

        timestamps, rows, precip = [], [], []
        feature_cols = [col[name] for name in FEATURE_NAMES]
        for row_no, row in enumerate(reader, start=1):
            if not row:
                continue
            lon = _parse_float(row, col["lon"], row_no, "lon")
            lat = _parse_float(row, col["lat"], row_no, "lat")
            if abs(lon - point.lon) > 1e-6 or abs(lat - point.lat) > 1e-6:
                continue
            timestamps.append(row[col["date"]].strip())
            values = np.empty(CATALOG_SIZE, dtype=np.float64)
            for k, c in enumerate(feature_cols):
                values[k] = _parse_float(row, c, row_no, FEATURE_NAMES[k])
            rows.append(values)
            precip.append(_parse_float(row, col["precip"], row_no, "precip"))

    if not rows:
        raise EmptyDataset(f"{path}: no rows for point ({point.lon}, {point.lat})")
    return Dataset(point, timestamps, np.vstack(rows), np.asarray(precip))


def _parse_float(row, col_idx, row_no, col_name) -> float:
    try:
        value = float(row[col_idx])
    except (ValueError, IndexError):
        raise NonFiniteValue(row_no, col_name) from None
    if not math.isfinite(value):
        raise NonFiniteValue(row_no, col_name)
    return value


def write_csv(datasets, path) -> None:
    """Write one or more datasets to a single catalog-schema CSV file."""
    if isinstance(datasets, Dataset):
        datasets = [datasets]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for data in datasets:
            p = data.point
            for i in range(len(data)):
                row = [data.timestamps[i], repr(p.lon), repr(p.lat), repr(p.elev)]
                row.extend(repr(v) for v in data.features[i].tolist())
                row.append(repr(float(data.precip[i])))
                writer.writerow(row)


def split(data: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Disjoint (train, test) partition preserving chronological order."""
    m = len(data)
    n_test = spec.test_count(m)
    n_train = m - n_test
    if n_train < 1:
        raise FractionOutOfRange(
            f"cannot split {m} samples into nonempty train and test portions"
        )
    if spec.mode == CHRONOLOGICAL:
        test_idx = range(n_train, m)
    else:
        rng = np.random.default_rng(spec.seed)
        test_idx = sorted(rng.choice(m, size=n_test, replace=False).tolist())
    test_set = set(test_idx)
    train_idx = [i for i in range(m) if i not in test_set]
    return data.take(train_idx), data.take(test_idx)
