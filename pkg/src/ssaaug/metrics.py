"""Fidelity measures between an original and a synthetic series."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SsaaugError, TooShort, ZeroDenominator, ZeroVariance
from .timeseries import as_values, summary_stats, znormalize

MAX_LAG_CAP = 40
_ZERO = 1e-12


def default_max_lag(n: int) -> int:
    return min(n - 1, MAX_LAG_CAP)


def delta_mean_pct(original, synthetic) -> float:
    """Change of the mean, as a percentage of the original mean."""
    m0, _ = summary_stats(original)
    m1, _ = summary_stats(synthetic)
    if abs(m0) < _ZERO:
        raise ZeroDenominator("original mean is zero; relative change undefined")
    return 100.0 * (m1 - m0) / m0


def delta_std_pct(original, synthetic) -> float:
    """Change of the sample standard deviation, as a percentage of the original's."""
    _, s0 = summary_stats(original)
    _, s1 = summary_stats(synthetic)
    if s0 < _ZERO:
        raise ZeroVariance("original is constant; relative change of std undefined")
    return 100.0 * (s1 - s0) / s0


def acf(s, max_lag: Optional[int] = None) -> np.ndarray:
    """Biased autocorrelation estimate for lags ``0 .. max_lag``.

    Every lag is normalized by the full lag-0 sum of squares, so ``acf[0]``
    is exactly 1 and the sequence is positive semidefinite.
    """
    x = as_values(s)
    n = x.size
    if n < 2:
        raise TooShort("ACF needs at least 2 samples")
    if max_lag is None:
        max_lag = default_max_lag(n)
    if not 0 <= max_lag < n:
        raise ValueError(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    d = x - math.fsum(x) / n
    denom = float(d @ d)
    if denom == 0.0 or np.ptp(x) == 0.0:
        raise ZeroVariance("ACF of a constant series is undefined")
    out = np.array([d[: n - lag] @ d[lag:] for lag in range(max_lag + 1)]) / denom
    out[0] = 1.0
    return out


def acf_rmsd(a, b, max_lag: Optional[int] = None) -> float:
    """Root-mean-square difference between two ACFs over lags ``0 .. max_lag``."""
    x, y = as_values(a), as_values(b)
    if max_lag is None:
        max_lag = default_max_lag(min(x.size, y.size))
    diff = acf(x, max_lag) - acf(y, max_lag)
    return float(np.sqrt(np.mean(diff**2)))


def dtw_distance(a, b) -> float:
    """Classic DTW with absolute-difference cost, unconstrained window.

    Paths are monotone, take unit steps (right, down, diagonal) and are
    anchored at both corners.  Cumulative costs are accumulated from the
    start of the path, ``D[i, j] = min(predecessors) + cost[i, j]``.
    """
    x, y = as_values(a), as_values(b)
    n, m = x.size, y.size
    cost = np.abs(x[:, None] - y[None, :]).tolist()
    inf = math.inf
    prev = [inf] * m
    for i in range(n):
        row = cost[i]
        cur = [0.0] * m
        for j in range(m):
            if i == 0 and j == 0:
                cur[0] = row[0]
                continue
            best = prev[j]
            if j > 0:
                if cur[j - 1] < best:
                    best = cur[j - 1]
                if prev[j - 1] < best:
                    best = prev[j - 1]
            cur[j] = best + row[j]
        prev = cur
    return prev[m - 1]


def dtw_norm(a, b) -> float:
    """DTW between the z-normalized series, divided by the length of ``a``."""
    za, zb = znormalize(a), znormalize(b)
    return dtw_distance(za, zb) / za.size


@dataclass
class FidelityReport:
    """One row of a fidelity comparison.

    A metric that could not be computed is ``None`` and its error class name
    is recorded in ``flags``.
    """

    delta_mean_pct: Optional[float]
    delta_std_pct: Optional[float]
    acf_rmsd: Optional[float]
    dtw_norm: Optional[float]
    flags: dict = field(default_factory=dict)

    @property
    def dtw_pct(self) -> Optional[float]:
        return None if self.dtw_norm is None else 100.0 * self.dtw_norm

    def as_dict(self) -> dict:
        return {
            "delta_mean_pct": self.delta_mean_pct,
            "delta_std_pct": self.delta_std_pct,
            "acf_rmsd": self.acf_rmsd,
            "dtw_norm": self.dtw_norm,
            "dtw_pct": self.dtw_pct,
            "flags": dict(self.flags),
        }


def fidelity_report(original, synthetic, max_lag: Optional[int] = None) -> FidelityReport:
    x, y = as_values(original), as_values(synthetic)
    values, flags = {}, {}
    for name, fn, args in (
        ("delta_mean_pct", delta_mean_pct, (x, y)),
        ("delta_std_pct", delta_std_pct, (x, y)),
        ("acf_rmsd", acf_rmsd, (x, y, max_lag)),
        ("dtw_norm", dtw_norm, (x, y)),
    ):
        try:
            values[name] = float(fn(*args))
        except SsaaugError as exc:
            values[name] = None
            flags[name] = type(exc).__name__
    return FidelityReport(flags=flags, **values)
