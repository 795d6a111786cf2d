"""Cyclic Jacobi eigensolver for small dense symmetric matrices."""
from __future__ import annotations

import numpy as np

from .errors import EigenFailure

MAX_SWEEPS = 100
OFF_TOL = 1e-12


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return np.sqrt(np.sum(off * off))


def jacobi_eigh(a, tol=OFF_TOL, max_sweeps=MAX_SWEEPS):
    """Eigen-decompose a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit every (p, q) pair with p < q in row order and zero the
    (p, q) entry with one plane rotation.  Iteration stops once the
    Frobenius norm of the off-diagonal part drops below ``tol`` times the
    norm of the whole matrix.

    Parameters
    ----------
    a : (M, M) array_like
        Symmetric matrix; only symmetric input gives meaningful results.
    tol : float
        Relative off-diagonal tolerance.
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`EigenFailure`.

    Returns
    -------
    w : (M,) ndarray
        Eigenvalues sorted in descending order.
    v : (M, M) ndarray
        Eigenvectors as columns, ``a @ v[:, k] == w[k] * v[:, k]``.
    """
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.T)
    m = a.shape[0]
    v = np.eye(m)
    scale = np.sqrt(np.sum(a * a))
    if scale == 0.0 or m == 1:
        return _sorted(np.diag(a).copy(), v)

    # entries this small cannot move any eigenvalue at double precision
    negligible = 1e-20 * scale
    for _ in range(max_sweeps):
        if _off_norm(a) <= tol * scale:
            return _sorted(np.diag(a).copy(), v)
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    if _off_norm(a) <= tol * scale:
        return _sorted(np.diag(a).copy(), v)
    raise EigenFailure(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def _sorted(w, v):
    # stable so equal eigenvalues keep their rotation order
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]
