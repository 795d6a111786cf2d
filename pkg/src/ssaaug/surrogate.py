"""Amplitude adjusted Fourier transform (AAFT) surrogates.

The surrogate is a reordering of the original samples: the amplitude
distribution is kept exactly while the temporal ordering follows a
phase-randomized, Gaussianized copy of the series, so the power spectrum is
kept approximately.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooShort
from .rng import RngLike, as_generator
from .timeseries import as_values

# relative bound on the imaginary residue of an inverse transform
IMAG_TOL = 1e-9


def dft(values) -> np.ndarray:
    """Forward DFT of any length, ``X[k] = sum_t x[t] exp(-2j pi k t / N)``."""
    x = np.asarray(values)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("dft needs a non-empty 1-D sequence")
    return np.fft.fft(x)


def idft(spectrum) -> np.ndarray:
    return np.fft.ifft(np.asarray(spectrum))


def real_idft(spectrum) -> np.ndarray:
    """Inverse DFT of a Hermitian spectrum, imaginary round-off dropped."""
    z = idft(spectrum)
    scale = max(np.max(np.abs(z.real)), np.finfo(float).tiny)
    resid = np.max(np.abs(z.imag))
    if resid > IMAG_TOL * scale and resid > 1e-300:
        raise ArithmeticError(f"inverse transform is not real (imag/real = {resid / scale:.3g})")
    return z.real.copy()


def sort_with_ranks(values):
    """Stable ascending sort.

    Returns ``(sorted_values, sort_index, rank_index)`` where
    ``sorted_values[r] == values[sort_index[r]]`` and ``rank_index`` is the
    inverse permutation (``rank_index[t]`` is the sorted position of
    ``values[t]``).  Indices are 0-based; ties keep their original order.
    """
    x = np.asarray(values)
    order = np.argsort(x, kind="stable")
    ranks = np.empty_like(order)
    ranks[order] = np.arange(order.size)
    return x[order], order, ranks


def phase_randomize(spectrum, rng: RngLike) -> np.ndarray:
    """Rotate the positive-frequency bins by independent uniform phases.

    ``N // 2`` angles are drawn from ``[0, 2 pi)``.  Bins ``1 .. (N - 1) // 2``
    are rotated, the upper half is overwritten by the mirrored complex
    conjugate, DC is left alone and, for even N, the Nyquist bin is only
    flipped in sign (its angle is rounded to 0 or pi) so it stays real.
    The input is expected to be the spectrum of a real series.
    """
    ft = np.asarray(spectrum, dtype=np.complex128)
    n = ft.size
    if n < 2:
        raise TooShort("phase randomization needs at least 2 bins")
    gen = as_generator(rng)
    phi = gen.uniform(0.0, 2.0 * np.pi, size=n // 2)

    out = ft.copy()
    half = (n - 1) // 2
    k = np.arange(1, half + 1)
    out[k] = ft[k] * np.exp(1j * phi[:half])
    out[n - k] = np.conj(out[k])
    if n % 2 == 0:
        out[n // 2] = ft[n // 2] * (1.0 if phi[-1] < np.pi else -1.0)
    return out


@dataclass
class AaftIntermediates:
    """Every intermediate vector of one AAFT run, for inspection and tests."""

    x_sorted: np.ndarray
    sort_index: np.ndarray
    rank_index: np.ndarray
    gaussian_sorted: np.ndarray
    gaussian_reranked: np.ndarray
    spectrum: np.ndarray
    randomized_spectrum: np.ndarray
    phase_randomized_series: np.ndarray
    s_rank_index: np.ndarray
    surrogate: np.ndarray


def aaft_detailed(s, rng: RngLike) -> AaftIntermediates:
    x = as_values(s)
    n = x.size
    if n < 2:
        raise TooShort("AAFT needs at least 2 samples")
    gen = as_generator(rng)

    x_sorted, sort_index, rank_index = sort_with_ranks(x)
    gaussian_sorted = np.sort(gen.standard_normal(n))
    # Gaussian copy that has the rank ordering of x
    gaussian_reranked = gaussian_sorted[rank_index]
    ft = dft(gaussian_reranked)
    ft_r = phase_randomize(ft, gen)
    s_series = real_idft(ft_r)
    _, _, s_rank_index = sort_with_ranks(s_series)
    surrogate = x_sorted[s_rank_index]
    return AaftIntermediates(
        x_sorted, sort_index, rank_index, gaussian_sorted, gaussian_reranked,
        ft, ft_r, s_series, s_rank_index, surrogate,
    )


def aaft(s, rng: RngLike) -> np.ndarray:
    """AAFT surrogate of ``s``.

    Parameters
    ----------
    s : array_like or TimeSeries
        Series of length >= 2.
    rng : int, RngState or numpy Generator
        Source of the Gaussian draws and phases.

    Returns
    -------
    ndarray
        A permutation of the samples of ``s``.
    """
    return aaft_detailed(s, rng).surrogate


def random_shuffle(s, rng: RngLike) -> np.ndarray:
    """Unconstrained random permutation; the no-structure baseline for AAFT."""
    x = as_values(s)
    return as_generator(rng).permutation(x)
