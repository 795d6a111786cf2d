"""Basic singular spectrum analysis.

Embedding, lag-covariance eigendecomposition, principal components,
diagonal-averaging reconstruction and significant-component selection.

Component indices are 0-based throughout: component 0 belongs to the
largest eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import EmptyGroup, IndexOutOfRange, WindowTooLarge
from .linalg import jacobi_eigh
from .timeseries import as_values

DEFAULT_WINDOW = 17
DEFAULT_SELECTOR = "knee"
# eigenvalues are floored at this fraction of the largest before taking logs
KNEE_FLOOR = 1e-12


@dataclass(frozen=True)
class SsaDecomposition:
    """Eigenpairs and principal components of one series.

    ``eigenvectors[k]`` and ``pcs[k]`` belong to ``eigenvalues[k]``; the
    eigenvalues are sorted in descending order.
    """

    eigenvalues: np.ndarray  # (M,)
    eigenvectors: np.ndarray  # (M, M), one eigenvector per row
    pcs: np.ndarray  # (M, N - M + 1), one principal component per row
    window: int
    origin_len: int

    @property
    def n_components(self) -> int:
        return self.window


@dataclass(frozen=True)
class ComponentGrouping:
    signal: tuple
    noise: tuple

    def __post_init__(self):
        if not self.signal:
            raise EmptyGroup("signal set must not be empty")


def embed(s, window: int = DEFAULT_WINDOW) -> np.ndarray:
    """Trajectory (Hankel) matrix of lagged windows, shape (N - M + 1, M).

    Row ``i`` is ``x[i : i + M]``.
    """
    x = as_values(s)
    if window < 2:
        raise ValueError("window must be >= 2")
    if window >= x.size:
        raise WindowTooLarge(f"window must be < series length (window={window}, length={x.size})")
    return sliding_window_view(x, window).copy()


def covariance(traj: np.ndarray) -> np.ndarray:
    """Lag-covariance ``Y^T Y / N`` with N the original series length.

    The divisor only rescales the eigenvalues; eigenvectors, PCs and
    reconstructions do not depend on it.
    """
    rows, m = traj.shape
    n = rows + m - 1
    c = traj.T @ traj / n
    return 0.5 * (c + c.T)


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each row made positive, first index on ties
    idx = np.argmax(np.abs(vecs), axis=1)
    signs = np.sign(vecs[np.arange(vecs.shape[0]), idx])
    signs[signs == 0] = 1.0
    return vecs * signs[:, None]


def decompose(s, window: int = DEFAULT_WINDOW) -> SsaDecomposition:
    """Eigendecompose the lag-covariance of ``s`` and project onto the eigenvectors.

    Parameters
    ----------
    s : array_like or TimeSeries
        Input series of length N.
    window : int
        Embedding dimension M, ``2 <= M < N``.

    Returns
    -------
    SsaDecomposition
        Eigenvalues (descending, negatives from round-off clamped to zero),
        unit eigenvectors with a deterministic sign, and the principal
        components ``pcs[k] = Y @ eigenvectors[k]``.
    """
    x = as_values(s)
    traj = embed(x, window)
    w, v = jacobi_eigh(covariance(traj))
    w = np.maximum(w, 0.0)
    vecs = _fix_signs(v.T)
    pcs = vecs @ traj.T
    return SsaDecomposition(w, vecs, pcs, window, x.size)


def _diagonal_average(mat: np.ndarray) -> np.ndarray:
    """Average the anti-diagonals of an (L, M) matrix into a length L+M-1 series."""
    rows, m = mat.shape
    n = rows + m - 1
    total = np.zeros(n)
    count = np.zeros(n)
    for j in range(m):
        total[j : j + rows] += mat[:, j]
        count[j : j + rows] += 1.0
    return total / count


def _check_group(d: SsaDecomposition, group) -> list:
    if isinstance(group, (int, np.integer)):
        group = [group]
    idx = sorted({int(k) for k in group})
    if not idx:
        raise EmptyGroup("component group must not be empty")
    if idx[0] < 0 or idx[-1] >= d.window:
        raise IndexOutOfRange(f"component indices must lie in [0, {d.window - 1}], got {idx}")
    return idx


def reconstruct(d: SsaDecomposition, group: Union[Iterable[int], ComponentGrouping, int]) -> np.ndarray:
    """Reconstructed component over a set of component indices.

    Each selected PC is expanded back into lag space through its eigenvector
    and the resulting trajectory matrix is averaged along its anti-diagonals.
    At sample ``t`` this averages ``M`` terms in the interior, ``t + 1``
    terms at the head and ``N - t`` at the tail (0-based ``t``).
    """
    if isinstance(group, ComponentGrouping):
        group = group.signal
    idx = _check_group(d, group)
    mat = d.pcs[idx].T @ d.eigenvectors[idx]
    return _diagonal_average(mat)


def reconstruct_all(d: SsaDecomposition) -> np.ndarray:
    """All single-component reconstructions, shape (M, N); rows sum to the input."""
    return np.stack([reconstruct(d, [k]) for k in range(d.window)])


# --- significant-component selection -------------------------------------------------

def parse_selector(spec: str) -> tuple:
    """Parse ``fixed:K``, ``var:FRAC`` or ``knee`` into ``(kind, param)``."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "fixed":
        k = int(arg)
        if k < 1:
            raise ValueError("fixed selector needs k >= 1")
        return kind, k
    if kind == "var":
        frac = float(arg) if arg else 0.9
        if not 0.0 < frac <= 1.0:
            raise ValueError("variance fraction must lie in (0, 1]")
        return kind, frac
    if kind == "knee" and not arg:
        return kind, None
    raise ValueError(f"unknown selector {spec!r}; expected fixed:K, var:FRAC or knee")


def select_k(eigenvalues, method: str = DEFAULT_SELECTOR) -> int:
    """Number of leading eigenvalues treated as signal; always at least 1."""
    lam = np.clip(np.asarray(eigenvalues, dtype=np.float64), 0.0, None)
    m = lam.size
    kind, arg = parse_selector(method)
    total = lam.sum()
    if m == 0 or total <= 0.0:
        return 1
    if kind == "fixed":
        return min(arg, m)
    if kind == "var":
        frac = np.cumsum(lam) / total
        # tolerance absorbs the last-ulp error of the cumulative sum
        return int(min(np.searchsorted(frac, arg - 1e-12) + 1, m))
    # knee: maximum discrete curvature of the log-scale scree plot.  The
    # point of maximum curvature is the first eigenvalue of the flat tail and
    # everything before it is signal.  Log scale keeps a dominant mean
    # component from hiding the oscillatory pairs behind it.
    if m < 3:
        return 1
    log_lam = np.log10(np.maximum(lam, KNEE_FLOOR * lam.max()))
    curv = log_lam[:-2] - 2.0 * log_lam[1:-1] + log_lam[2:]
    if np.max(curv) <= 0.0:
        return 1
    return int(np.argmax(curv)) + 1


def select_significant(d: SsaDecomposition, method: str = DEFAULT_SELECTOR) -> ComponentGrouping:
    k = select_k(d.eigenvalues, method)
    return ComponentGrouping(tuple(range(k)), tuple(range(k, d.window)))
