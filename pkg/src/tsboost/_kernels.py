"""Numeric inner loops with two interchangeable backends.

The default backend compiles the kernels with numba's ``@njit``. Setting the
environment variable ``TSBOOST_BACKEND=numpy`` (read once, at import time)
selects pure-numpy implementations instead; the same happens automatically
when numba is not importable. Both backends implement identical formulas, so
they agree to floating-point round-off (summation order may differ in the
last ulp).

Kernels exposed here:

* ``bspline_design``   -- B-spline design matrix by de Boor recursion
* ``periodogram_ordinates`` -- direct O(n^2) DFT periodogram
* ``cdist_euclidean``  -- series-by-center Euclidean distance matrix
* ``cdist_penrose``    -- series-by-center Penrose shape distance matrix
"""

import os

import numpy as np

_requested = os.environ.get("TSBOOST_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"TSBOOST_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from numba import njit
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised only without numba
        BACKEND = "numpy"
else:
    BACKEND = "numpy"


def _design_loops(x, knots, degree, out):
    # de Boor "basis funs" recursion per evaluation point; the knot vector is
    # padded so every x lies strictly inside the full-support region.
    nb = knots.shape[0] - degree - 1
    left = np.empty(degree + 1)
    right = np.empty(degree + 1)
    vals = np.empty(degree + 1)
    for r in range(x.shape[0]):
        xr = x[r]
        # interval index i with knots[i] <= xr < knots[i+1], clamped so the
        # right domain endpoint falls in the last proper interval
        i = degree
        while i < nb - 1 and xr >= knots[i + 1]:
            i += 1
        vals[0] = 1.0
        for j in range(1, degree + 1):
            left[j] = xr - knots[i + 1 - j]
            right[j] = knots[i + j] - xr
            saved = 0.0
            for k in range(j):
                tmp = vals[k] / (right[k + 1] + left[j - k])
                vals[k] = saved + right[k + 1] * tmp
                saved = left[j - k] * tmp
            vals[j] = saved
        for k in range(degree + 1):
            out[r, i - degree + k] = vals[k]
    return out


def _periodogram_loops(y, out):
    n = y.shape[0]
    half = n // 2
    for j in range(1, half + 1):
        f = 2.0 * np.pi * j / n
        re = 0.0
        im = 0.0
        for t in range(n):
            re += y[t] * np.cos(f * (t + 1))
            im -= y[t] * np.sin(f * (t + 1))
        out[j - 1] = (re * re + im * im) / n
    return out


def _cdist_euclidean_loops(Y, C, out):
    n = Y.shape[1]
    for i in range(Y.shape[0]):
        for k in range(C.shape[0]):
            s = 0.0
            for j in range(n):
                diff = Y[i, j] - C[k, j]
                s += diff * diff
            out[i, k] = np.sqrt(s)
    return out


def _cdist_penrose_loops(Y, C, out):
    # sqrt(n/(n-1) * (dbar2 - q2)); the radicand is a variance so negatives
    # can only come from round-off and are clamped by the caller
    n = Y.shape[1]
    for i in range(Y.shape[0]):
        sy = 0.0
        for j in range(n):
            sy += Y[i, j]
        for k in range(C.shape[0]):
            sc = 0.0
            d2 = 0.0
            for j in range(n):
                sc += C[k, j]
                diff = Y[i, j] - C[k, j]
                d2 += diff * diff
            dbar2 = d2 / n
            q2 = (sy - sc) * (sy - sc) / (n * n)
            out[i, k] = dbar2 - q2
    return out


if BACKEND == "numba":
    _design_impl = njit(cache=True)(_design_loops)
    _periodogram_impl = njit(cache=True)(_periodogram_loops)
    _cdist_euclidean_impl = njit(cache=True)(_cdist_euclidean_loops)
    _cdist_penrose_impl = njit(cache=True)(_cdist_penrose_loops)
else:
    def _design_impl(x, knots, degree, out):
        return _design_loops(x, knots, degree, out)

    def _periodogram_impl(y, out):
        n = y.shape[0]
        half = n // 2
        j = np.arange(1, half + 1)
        t = np.arange(1, n + 1)
        f = 2.0 * np.pi * np.outer(j, t) / n
        re = np.cos(f) @ y
        im = -np.sin(f) @ y
        out[:] = (re * re + im * im) / n
        return out

    def _cdist_euclidean_impl(Y, C, out):
        diff = Y[:, None, :] - C[None, :, :]
        out[:] = np.sqrt(np.einsum("ikj,ikj->ik", diff, diff))
        return out

    def _cdist_penrose_impl(Y, C, out):
        n = Y.shape[1]
        diff = Y[:, None, :] - C[None, :, :]
        dbar2 = np.einsum("ikj,ikj->ik", diff, diff) / n
        q2 = np.subtract.outer(Y.sum(axis=1), C.sum(axis=1)) ** 2 / (n * n)
        out[:] = dbar2 - q2
        return out


def bspline_design(x, knots, degree):
    """Design matrix B with B[r, j] = B_j(x[r]) for the padded knot vector."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    knots = np.ascontiguousarray(knots, dtype=np.float64)
    nb = knots.shape[0] - degree - 1
    out = np.zeros((x.shape[0], nb))
    return _design_impl(x, knots, degree, out)


def periodogram_ordinates(y):
    """Periodogram at the positive Fourier frequencies, DC excluded."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    out = np.empty(y.shape[0] // 2)
    return _periodogram_impl(y, out)


def cdist_euclidean(Y, C):
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.float64)
    out = np.empty((Y.shape[0], C.shape[0]))
    return _cdist_euclidean_impl(Y, C, out)


def cdist_penrose_radicand(Y, C):
    """Matrix of (dbar^2 - q^2) values, before the n/(n-1) scale and sqrt."""
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.float64)
    out = np.empty((Y.shape[0], C.shape[0]))
    return _cdist_penrose_impl(Y, C, out)
