"""Window slicing and window warping augmenters."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooShort
from .rng import RngLike, as_generator
from .timeseries import as_values


@dataclass(frozen=True)
class SliceConfig:
    keep_fraction: float = 0.9

    def __post_init__(self):
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ValueError("keep_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class WarpConfig:
    window_fraction: float = 0.1
    warp_ratios: tuple = (0.5, 2.0)

    def __post_init__(self):
        if not 0.0 < self.window_fraction < 1.0:
            raise ValueError("window_fraction must lie in (0, 1)")
        ratios = tuple(float(r) for r in self.warp_ratios)
        if not ratios or any(not r > 0 for r in ratios):
            raise ValueError("warp_ratios must be a non-empty set of positive numbers")
        object.__setattr__(self, "warp_ratios", ratios)


def _ceil_frac(fraction, n):
    # 0.9 * 100 is 90.00000000000001 in binary floating point
    return math.ceil(fraction * n - 1e-9)


def resample_linear(values, target_len: int) -> np.ndarray:
    """Linearly interpolate onto ``target_len`` evenly spaced points spanning the input.

    The first and last samples are reproduced exactly and an unchanged
    length returns the input unchanged.
    """
    x = as_values(values)
    if x.size < 2 or target_len < 2:
        raise TooShort("linear resampling needs input and target length >= 2")
    if target_len == x.size:
        return x.copy()
    pos = np.linspace(0.0, x.size - 1.0, target_len)
    out = np.interp(pos, np.arange(x.size, dtype=np.float64), x)
    out[0], out[-1] = x[0], x[-1]
    return out


def window_slice(s, cfg: SliceConfig = SliceConfig(), rng: RngLike = 0) -> np.ndarray:
    """Crop a random contiguous ``keep_fraction`` of the series and stretch it back to N."""
    x = as_values(s)
    n = x.size
    seg = _ceil_frac(cfg.keep_fraction, n)
    if n < 3 or seg < 2:
        raise TooShort(f"window slicing needs N >= 3 and a kept segment of >= 2 samples (N={n})")
    start = int(as_generator(rng).integers(0, n - seg + 1))
    return resample_linear(x[start : start + seg], n)


def window_warp(s, cfg: WarpConfig = WarpConfig(), rng: RngLike = 0) -> np.ndarray:
    """Stretch or squeeze a random window, then resample the whole series back to N.

    The window spans ``ceil(window_fraction * N)`` samples (at least 2) and is
    resampled to ``round(len * ratio)`` samples (at least 2), with the ratio
    drawn uniformly from ``cfg.warp_ratios``.
    """
    x = as_values(s)
    n = x.size
    if n < 10:
        raise TooShort(f"window warping needs N >= 10 (N={n})")
    gen = as_generator(rng)
    win = max(2, _ceil_frac(cfg.window_fraction, n))
    start = int(gen.integers(0, n - win + 1))
    ratio = cfg.warp_ratios[int(gen.integers(0, len(cfg.warp_ratios)))]
    warped = resample_linear(x[start : start + win], max(2, int(round(win * ratio))))
    joined = np.concatenate([x[:start], warped, x[start + win :]])
    return resample_linear(joined, n)
