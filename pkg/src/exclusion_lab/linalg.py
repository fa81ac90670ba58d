"""Small dense linear algebra (n <= 8): solves, sorted spectra, spectral radius."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

MAX_DIM = 8
SINGULAR_RTOL = 1e-13


class SingularMatrix(ArithmeticError):
    pass


class NoConvergence(ArithmeticError):
    pass


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"matrix too large for this module (n={a.shape[0]} > {MAX_DIM})")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def inf_norm(a) -> float:
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return float(np.max(np.abs(a))) if a.size else 0.0
    return float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0


def solve_linear(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` by LU with partial pivoting.

    Raises SingularMatrix when a pivot is below ``1e-13 * ||a||_inf``.
    """
    a = _square(a)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {a.shape[0]}")
    scale = inf_norm(a)
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) <= SINGULAR_RTOL * scale:
        raise SingularMatrix(f"pivot {np.min(pivots):.3e} below {SINGULAR_RTOL:g}*||A||={SINGULAR_RTOL * scale:.3e}")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def right_divide(f, v) -> np.ndarray:
    """Return ``f @ inv(v)`` without forming the inverse."""
    f = np.asarray(f, dtype=float)
    return solve_linear(np.asarray(v, dtype=float).T, f.T).T


def sort_eigenvalues(vals) -> np.ndarray:
    vals = np.asarray(vals, dtype=complex)
    order = np.lexsort((-vals.imag, -vals.real))
    return vals[order]


def eigenvalues(a) -> np.ndarray:
    """Eigenvalues of a real matrix, sorted by descending real part then imaginary part.

    Complex eigenvalues come out as exact conjugate pairs.
    """
    a = _square(a)
    n = a.shape[0]
    if n == 1:
        return np.array([complex(a[0, 0])])
    if n == 2:
        vals = _eig2(a)
    else:
        try:
            vals = np.linalg.eigvals(a)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(str(exc)) from exc
    vals = np.asarray(vals, dtype=complex)
    # snap pairs: LAPACK returns exact conjugates, but clean near-zero imaginary noise
    vals = np.where(np.abs(vals.imag) <= 1e-14 * max(1.0, inf_norm(a)), vals.real + 0j, vals)
    return sort_eigenvalues(vals)


def _eig2(a) -> np.ndarray:
    (p, q), (r, s) = a
    half_tr = 0.5 * (p + s)
    disc = (0.5 * (p - s)) ** 2 + q * r
    if disc >= 0:
        root = np.sqrt(disc)
        # avoid cancellation for the smaller-magnitude root
        big = half_tr + root if half_tr >= 0 else half_tr - root
        det = p * s - q * r
        small = det / big if big != 0 else half_tr - root
        return np.array([big, small], dtype=complex)
    root = np.sqrt(-disc)
    return np.array([complex(half_tr, root), complex(half_tr, -root)])


def spectral_radius(a) -> float:
    vals = eigenvalues(a)
    return float(np.max(np.abs(vals)))
