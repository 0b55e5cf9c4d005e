"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``QCOVLAB_NUMPY_ONLY=1`` in the environment before import to force the
numpy path (also used automatically when numba is not importable).  Both
paths are always importable as ``*_numpy`` / ``*_numba`` so the benchmark
and the tests can compare them directly.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = [
    "USE_NUMBA",
    "sturm_count",
    "bisect_eigenvalues",
    "koszul_col_signs",
    "colsum_norm",
]

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("QCOVLAB_NUMPY_ONLY", "") not in ("1", "true", "yes")

# Pivot floor for the LDL^T recurrence in Sturm counts.
_PIVMIN_SCALE = 1e-300
# Absolute stopping width relative to the spectral radius.  Tiny so that
# eigenvalues many decades below the largest one keep relative accuracy;
# the iteration cap bounds the work for eigenvalues at zero.
_ABS_FLOOR = 1e-290


# ---------------------------------------------------------------- numpy path


def sturm_count_numpy(diag, off2, x):
    """Number of eigenvalues strictly below each entry of ``x``.

    ``off2`` holds squared off-diagonals.  Vectorized over ``x``; the
    recurrence over matrix rows is inherently sequential.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    pivmin = _PIVMIN_SCALE * max(1.0, float(np.max(off2, initial=0.0)))
    count = np.zeros(x.shape, dtype=np.int64)
    d = diag[0] - x
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    count += d < 0
    for i in range(1, diag.shape[0]):
        d = diag[i] - x - off2[i - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        count += d < 0
    return count


def bisect_eigenvalues_numpy(diag, off, rtol):
    """All eigenvalues, ascending, by simultaneous bisection."""
    n = diag.shape[0]
    off2 = off * off
    lo, hi = _gershgorin(diag, off)
    k = np.arange(n)
    left = np.full(n, lo)
    right = np.full(n, hi)
    scale = max(abs(lo), abs(hi), 1e-300)
    for _ in range(200):
        mid = 0.5 * (left + right)
        below = sturm_count_numpy(diag, off2, mid)
        go_left = below > k
        right = np.where(go_left, mid, right)
        left = np.where(go_left, left, mid)
        width = right - left
        if np.all(width <= rtol * np.maximum(np.abs(left), np.abs(right)) + _ABS_FLOOR * scale):
            break
    return 0.5 * (left + right)


def koszul_col_signs_numpy(parity_left, p_right, dim_right):
    """Column signs (-1)**(p(B) p(v)) of a graded Kronecker product."""
    if p_right % 2 == 0:
        return np.ones(parity_left.shape[0] * dim_right)
    s = 1.0 - 2.0 * (parity_left % 2)
    return np.repeat(s, dim_right)


def colsum_norm_numpy(m):
    if m.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(m), axis=0)))


def _gershgorin(diag, off):
    r = np.zeros_like(diag)
    r[:-1] += np.abs(off)
    r[1:] += np.abs(off)
    lo = float(np.min(diag - r))
    hi = float(np.max(diag + r))
    pad = 1e-14 * max(abs(lo), abs(hi), 1.0)
    return lo - pad, hi + pad


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _sturm_count_scalar(diag, off2, x, pivmin):
        count = 0
        d = diag[0] - x
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0:
            count += 1
        for i in range(1, diag.shape[0]):
            d = diag[i] - x - off2[i - 1] / d
            if abs(d) < pivmin:
                d = -pivmin
            if d < 0:
                count += 1
        return count

    @njit(cache=True)
    def _sturm_count_vec(diag, off2, xs, pivmin):
        out = np.empty(xs.shape[0], dtype=np.int64)
        for j in range(xs.shape[0]):
            out[j] = _sturm_count_scalar(diag, off2, xs[j], pivmin)
        return out

    @njit(cache=True)
    def _bisect_numba(diag, off2, lo, hi, rtol, pivmin):
        n = diag.shape[0]
        out = np.empty(n)
        scale = max(abs(lo), abs(hi), 1e-300)
        for k in range(n):
            left = lo
            right = hi
            for _ in range(200):
                mid = 0.5 * (left + right)
                if _sturm_count_scalar(diag, off2, mid, pivmin) > k:
                    right = mid
                else:
                    left = mid
                if right - left <= rtol * max(abs(left), abs(right)) + _ABS_FLOOR * scale:
                    break
            out[k] = 0.5 * (left + right)
        return out

    @njit(cache=True)
    def _koszul_numba(parity_left, p_right, dim_right):
        n = parity_left.shape[0]
        out = np.ones(n * dim_right)
        if p_right % 2 == 0:
            return out
        for i in range(n):
            if parity_left[i] % 2 == 1:
                for k in range(dim_right):
                    out[i * dim_right + k] = -1.0
        return out

    @njit(cache=True)
    def _colsum_numba(m):
        # row-outer so the C-ordered matrix is read contiguously
        sums = np.zeros(m.shape[1])
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                z = m[i, j]
                sums[j] += np.sqrt(z.real * z.real + z.imag * z.imag)
        best = 0.0
        for j in range(m.shape[1]):
            if sums[j] > best:
                best = sums[j]
        return best

    def sturm_count_numba(diag, off2, x):
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        pivmin = _PIVMIN_SCALE * max(1.0, float(np.max(off2, initial=0.0)))
        return _sturm_count_vec(diag, off2, xs, pivmin)

    def bisect_eigenvalues_numba(diag, off, rtol):
        off2 = off * off
        lo, hi = _gershgorin(diag, off)
        pivmin = _PIVMIN_SCALE * max(1.0, float(np.max(off2, initial=0.0)))
        return _bisect_numba(diag, off2, lo, hi, rtol, pivmin)

    def koszul_col_signs_numba(parity_left, p_right, dim_right):
        return _koszul_numba(np.ascontiguousarray(parity_left, dtype=np.int64), int(p_right), int(dim_right))

    def colsum_norm_numba(m):
        if m.size == 0:
            return 0.0
        return float(_colsum_numba(np.ascontiguousarray(m)))


if USE_NUMBA:
    sturm_count = sturm_count_numba
    bisect_eigenvalues = bisect_eigenvalues_numba
    koszul_col_signs = koszul_col_signs_numba
    colsum_norm = colsum_norm_numba
else:
    sturm_count = sturm_count_numpy
    bisect_eigenvalues = bisect_eigenvalues_numpy
    koszul_col_signs = koszul_col_signs_numpy
    colsum_norm = colsum_norm_numpy
