"""Shape-preserving augmentation: SSA split, surrogate on the irregular part, recombine.

Also dispatches the three baseline augmenters and balances classes by
per-class fold factors.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import ssa
from .errors import IrregularDegenerateWarning, MissingFoldFactor
from .rng import RngLike, derive_seed
from .surrogate import aaft
from .timeseries import Dataset, LabeledSeries, TimeSeries, as_values
from .windows import SliceConfig, WarpConfig, window_slice, window_warp

VARIANTS = ("ssa_surrogate", "surrogate_only", "window_slice", "window_warp")
_DEGENERATE_RTOL = 1e-10


@dataclass(frozen=True)
class AugmentMethod:
    variant: str = "ssa_surrogate"
    window: int = ssa.DEFAULT_WINDOW
    selector: str = ssa.DEFAULT_SELECTOR
    slice_cfg: SliceConfig = field(default_factory=SliceConfig)
    warp_cfg: WarpConfig = field(default_factory=WarpConfig)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown augmentation method {self.variant!r}; choose from {VARIANTS}")
        if self.variant == "ssa_surrogate":
            ssa.parse_selector(self.selector)


@dataclass(frozen=True)
class ShapeSplit:
    shape: np.ndarray
    irregular: np.ndarray
    grouping: ssa.ComponentGrouping
    decomposition: ssa.SsaDecomposition


def split_shape(s, window: int = ssa.DEFAULT_WINDOW, selector: str = ssa.DEFAULT_SELECTOR) -> ShapeSplit:
    """Separate ``s`` into its SSA shape (significant components) and the residual."""
    x = as_values(s)
    d = ssa.decompose(x, window)
    grouping = ssa.select_significant(d, selector)
    shape = ssa.reconstruct(d, grouping.signal)
    # residual form keeps shape + irregular == x up to one rounding
    return ShapeSplit(shape, x - shape, grouping, d)


def _surrogate_from_split(x: np.ndarray, split: ShapeSplit, rng: RngLike) -> np.ndarray:
    irr = split.irregular
    if np.ptp(irr) <= _DEGENERATE_RTOL * np.max(np.abs(x)):
        warnings.warn(
            "irregular component is constant; returning the input unrandomized",
            IrregularDegenerateWarning,
            stacklevel=3,
        )
        return x.copy()
    return split.shape + aaft(irr, rng)


def synthesize_one(s, method: AugmentMethod = AugmentMethod(), rng: RngLike = 0) -> np.ndarray:
    """One synthetic series from ``s`` with the chosen method.

    For ``ssa_surrogate`` the output is ``shape + aaft(s - shape)``; if the
    irregular part is constant an :class:`IrregularDegenerateWarning` is
    issued and ``s`` is returned unchanged.
    """
    x = as_values(s)
    if method.variant == "ssa_surrogate":
        return _surrogate_from_split(x, split_shape(x, method.window, method.selector), rng)
    if method.variant == "surrogate_only":
        return aaft(x, rng)
    if method.variant == "window_slice":
        return window_slice(x, method.slice_cfg, rng)
    return window_warp(x, method.warp_cfg, rng)


# --- class balancing -------------------------------------------------------------------

@dataclass(frozen=True)
class AugmentPlan:
    per_class_fold: Mapping[int, int]
    method: AugmentMethod = field(default_factory=AugmentMethod)
    base_seed: int = 0

    def __post_init__(self):
        folds = {int(k): int(v) for k, v in self.per_class_fold.items()}
        if any(v < 0 for v in folds.values()):
            raise ValueError("fold factors must be non-negative")
        object.__setattr__(self, "per_class_fold", folds)


def derive_fold_plan(counts: Mapping[int, int], fold_for_majority: int) -> dict:
    """Per-class fold factors that roughly equalize class sizes.

    The largest class gets ``fold_for_majority``; every class gets that
    times ``max_count // count``.  For scores with 31, 38, 6 and 3 series and
    a majority fold of 10 this yields 10, 10, 60 and 120.
    """
    if fold_for_majority < 0:
        raise ValueError("fold_for_majority must be >= 0")
    if any(c < 1 for c in counts.values()):
        raise ValueError("every class count must be >= 1")
    if not counts:
        return {}
    top = max(counts.values())
    return {int(label): fold_for_majority * (top // c) for label, c in sorted(counts.items())}


def _item_key(item: LabeledSeries, index: int) -> str:
    return item.id or f"{index:06d}"


def augment_dataset(dataset: Dataset, plan: AugmentPlan) -> Dataset:
    """Synthesize ``fold(label)`` new series per original; originals are not included.

    Each synthetic series is seeded from ``(base_seed, parent id, replica)``
    only, so the result does not depend on processing order.  Output is
    ordered by parent id, then replica index.
    """
    missing = sorted({it.label for it in dataset.items} - set(plan.per_class_fold))
    if missing:
        raise MissingFoldFactor(f"no fold factor for labels {missing}")

    method = plan.method
    keyed = sorted(((_item_key(it, i), it) for i, it in enumerate(dataset.items)), key=lambda p: p[0])
    out = []
    for key, item in keyed:
        fold = plan.per_class_fold[item.label]
        if fold == 0:
            continue
        x = item.series.values
        split = split_shape(x, method.window, method.selector) if method.variant == "ssa_surrogate" else None
        for r in range(fold):
            seed = derive_seed(plan.base_seed, key, r)
            if split is not None:
                y = _surrogate_from_split(x, split, seed)
            else:
                y = synthesize_one(x, method, seed)
            out.append(
                LabeledSeries(
                    TimeSeries(y, item.series.sample_rate_hz),
                    item.label,
                    item.subject_id,
                    item.trial_id,
                    id=f"{key}/aug{r:04d}",
                )
            )
    return Dataset(out)


def fold_table(counts: Mapping[int, int], folds: Mapping[int, int]) -> list:
    """Rows ``(label, original, fold, synthetic)`` in descending label order plus a total row."""
    rows = [(label, counts[label], folds[label], counts[label] * folds[label]) for label in sorted(counts, reverse=True)]
    rows.append(("total", sum(r[1] for r in rows), None, sum(r[3] for r in rows)))
    return rows
