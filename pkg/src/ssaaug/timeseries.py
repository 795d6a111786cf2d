"""Series containers, length canonicalization and basic statistics.

Every numeric routine in the package accepts either a :class:`TimeSeries` or
any 1-D array-like and returns plain ``float64`` numpy arrays; the containers
exist to validate data at the boundaries (files, datasets, the CLI).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidSeries, TooShort, ZeroVariance


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A finite, non-empty, real-valued sequence.

    Parameters
    ----------
    values : array-like
        Samples, stored as a read-only float64 array.
    sample_rate_hz : float, optional
        Sampling rate, if known (30 Hz for the accelerometer recordings).
    """

    values: np.ndarray
    sample_rate_hz: Optional[float] = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise InvalidSeries(f"series must be 1-D, got shape {arr.shape}")
        if arr.size == 0:
            raise InvalidSeries("series must contain at least one sample")
        if not np.all(np.isfinite(arr)):
            raise InvalidSeries("series contains NaN or Inf")
        if self.sample_rate_hz is not None and not self.sample_rate_hz > 0:
            raise InvalidSeries("sample_rate_hz must be positive")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.sample_rate_hz == other.sample_rate_hz and np.array_equal(self.values, other.values)

    __hash__ = None

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class LabeledSeries:
    series: TimeSeries
    label: int
    subject_id: str = ""
    trial_id: str = ""
    id: str = ""

    def __post_init__(self):
        if not isinstance(self.series, TimeSeries):
            object.__setattr__(self, "series", TimeSeries(self.series))
        object.__setattr__(self, "label", int(self.label))


@dataclass
class Dataset:
    """An ordered collection of labeled series.

    ``class_counts`` is always recomputed from ``items`` so the two can never
    disagree.
    """

    items: list = field(default_factory=list)

    def __post_init__(self):
        self.items = list(self.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def class_counts(self) -> dict:
        return dict(sorted(Counter(item.label for item in self.items).items()))

    @property
    def labels(self) -> np.ndarray:
        return np.array([item.label for item in self.items], dtype=np.int64)

    def check_labels(self, allowed: Iterable[int]) -> None:
        allowed = set(allowed)
        bad = sorted({item.label for item in self.items} - allowed)
        if bad:
            raise InvalidSeries(f"labels {bad} not in allowed set {sorted(allowed)}")


def as_values(s) -> np.ndarray:
    """Return the samples of ``s`` as a validated 1-D float64 array."""
    arr = np.asarray(s, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidSeries(f"expected a non-empty 1-D series, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSeries("series contains NaN or Inf")
    return arr


def canonicalize_length(s, target_len: int) -> np.ndarray:
    """Zero-pad or truncate ``s`` to exactly ``target_len`` samples."""
    if target_len < 1:
        raise ValueError("target_len must be >= 1")
    x = as_values(s)
    out = np.zeros(target_len, dtype=np.float64)
    n = min(x.size, target_len)
    out[:n] = x[:n]
    return out


def summary_stats(s) -> tuple:
    """Mean and sample (N-1) standard deviation.

    Sums are exactly rounded (``math.fsum``) so the result depends only on
    the multiset of samples, not their order: any permutation of a series
    has bit-identical statistics.
    """
    x = as_values(s)
    n = x.size
    mean = math.fsum(x) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var)


def znormalize(s) -> np.ndarray:
    """Shift to zero mean and scale to unit sample standard deviation."""
    x = as_values(s)
    if x.size < 2:
        raise TooShort("z-normalization needs at least 2 samples")
    mean, std = summary_stats(x)
    if std == 0.0 or np.ptp(x) == 0.0:
        raise ZeroVariance("cannot z-normalize a constant series")
    return (x - mean) / std


def map_labels(dataset: Dataset, mapping: dict) -> Dataset:
    """Relabel every item through ``mapping``; unknown labels raise KeyError."""
    return Dataset(
        [
            LabeledSeries(it.series, mapping[it.label], it.subject_id, it.trial_id, it.id)
            for it in dataset.items
        ]
    )


# Clinical scores 0..3 onto three trainable classes: the two rare low scores merge.
MERGE_LOW_SCORES = {0: 0, 1: 0, 2: 1, 3: 2}
IDENTITY_3 = {0: 0, 1: 1, 2: 2}


def from_arrays(arrays: Sequence, labels: Sequence[int], prefix: str = "s") -> Dataset:
    """Convenience constructor: ids are ``{prefix}{index:05d}``."""
    return Dataset(
        [LabeledSeries(TimeSeries(a), int(y), id=f"{prefix}{i:05d}") for i, (a, y) in enumerate(zip(arrays, labels))]
    )
