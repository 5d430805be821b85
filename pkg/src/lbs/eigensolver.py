"""In-house dense symmetric eigensolver (eigenvalues only).

Classical two-stage scheme: Householder reduction to tridiagonal form
followed by implicit-shift QL iteration.  The QL sweep deflates an
off-diagonal entry once it falls below ``threshold_factor * scale`` where
scale is the max-norm of the tridiagonal data, so the absolute eigenvalue
accuracy is of that order.

The routines are deliberately self-contained (no LAPACK eigensolver) so
the grid oracle remains an evaluation path independent of every other
numerical component; numba acceleration is used when available, with
algorithmically identical numpy/pure-Python fallbacks.  All loops are
single-threaded and deterministic.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


#: Off-diagonal deflation threshold, as a multiple of the matrix scale.
OFF_DIAGONAL_FACTOR = 1e-11

_MAX_QL_ITER = 60


@njit(cache=True, fastmath=True)
def _tridiagonalize_loops(a):
    """Householder reduction, full-matrix storage, in place."""
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    u = np.empty(n)
    p = np.empty(n)
    for k in range(n - 2):
        s2 = 0.0
        for i in range(k + 1, n):
            s2 += a[i, k] * a[i, k]
        alpha = math.sqrt(s2)
        if alpha == 0.0:
            e[k] = 0.0
            continue
        if a[k + 1, k] > 0.0:
            alpha = -alpha
        e[k] = alpha
        for i in range(k + 1, n):
            u[i] = a[i, k]
        u[k + 1] -= alpha
        un2 = s2 - 2.0 * alpha * a[k + 1, k] + alpha * alpha
        if un2 <= 0.0:
            continue
        beta = 2.0 / un2
        for i in range(k + 1, n):
            acc = 0.0
            for j in range(k + 1, n):
                acc += a[i, j] * u[j]
            p[i] = beta * acc
        kap = 0.0
        for i in range(k + 1, n):
            kap += u[i] * p[i]
        kap *= 0.5 * beta
        for i in range(k + 1, n):
            p[i] -= kap * u[i]
        for i in range(k + 1, n):
            ui = u[i]
            qi = p[i]
            for j in range(k + 1, n):
                a[i, j] -= ui * p[j] + qi * u[j]
    for i in range(n):
        d[i] = a[i, i]
    if n > 1:
        e[n - 2] = a[n - 1, n - 2]
    return d, e


def _tridiagonalize_numpy(a):
    """Same reduction with vectorized rank-2 updates (no-numba fallback)."""
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        s2 = float(x @ x)
        alpha = math.sqrt(s2)
        if alpha == 0.0:
            e[k] = 0.0
            continue
        if x[0] > 0.0:
            alpha = -alpha
        e[k] = alpha
        u = x.copy()
        u[0] -= alpha
        un2 = s2 - 2.0 * alpha * x[0] + alpha * alpha
        if un2 <= 0.0:
            continue
        beta = 2.0 / un2
        sub = a[k + 1:, k + 1:]
        p = beta * (sub @ u)
        kap = 0.5 * beta * float(u @ p)
        q = p - kap * u
        sub -= np.outer(u, q)
        sub -= np.outer(q, u)
    d[:] = np.diag(a)
    if n > 1:
        e[n - 2] = a[n - 1, n - 2]
    return d, e


@njit(cache=True)
def _ql_implicit_loops(d, ee, tol, max_iter):
    """Implicit-shift QL on (d, ee); returns -1 on success, else the
    stuck eigenvalue index."""
    n = d.size
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(ee[m]) <= tol + 2.3e-16 * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return l
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + ee[l] / (g + r)
            else:
                g = d[m] - d[l] + ee[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            interrupted = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    interrupted = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if not interrupted:
                d[l] -= p
                ee[l] = g
                ee[m] = 0.0
    return -1


_ql_python = _ql_implicit_loops.py_func if HAVE_NUMBA else _ql_implicit_loops


def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a symmetric matrix to tridiagonal (d, e); a is overwritten."""
    a = np.ascontiguousarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    if HAVE_NUMBA:
        return _tridiagonalize_loops(a)
    return _tridiagonalize_numpy(a)


def tridiagonal_eigenvalues(d: np.ndarray, e: np.ndarray,
                            threshold_factor: float = OFF_DIAGONAL_FACTOR) -> np.ndarray:
    """All eigenvalues of the symmetric tridiagonal matrix (d, e), sorted."""
    n = d.size
    dd = np.array(d, dtype=float)
    ee = np.zeros(n)
    if n > 1:
        ee[: n - 1] = e
    scale = max(float(np.max(np.abs(dd))), float(np.max(np.abs(ee)))) if n else 0.0
    tol = threshold_factor * scale
    solver = _ql_implicit_loops if HAVE_NUMBA else _ql_python
    stuck = solver(dd, ee, tol, _MAX_QL_ITER)
    if stuck >= 0:
        raise NumericError(
            f"QL iteration failed to converge for eigenvalue index {stuck} "
            f"after {_MAX_QL_ITER} sweeps"
        )
    dd.sort()
    return dd


def symmetric_eigenvalues(a: np.ndarray,
                          threshold_factor: float = OFF_DIAGONAL_FACTOR) -> np.ndarray:
    """All eigenvalues of a dense symmetric matrix, ascending.

    The input is copied; accuracy is ~threshold_factor times the matrix
    scale (see module docstring).
    """
    d, e = tridiagonalize(np.array(a, dtype=float, copy=True))
    return tridiagonal_eigenvalues(d, e, threshold_factor)
