"""Distances between series and center curves.

Three measures sit behind one dispatch: plain Euclidean, the Penrose shape
distance (level-insensitive) and the Euclidean distance between periodogram
ordinates (spectral shape). The periodogram is the direct-summation DFT
modulus at the positive Fourier frequencies f_j = 2*pi*j/n, j = 1..n//2;
the DC term is excluded, which makes the spectral distance invariant to
adding a constant.
"""

import enum

import numpy as np

from ._kernels import cdist_euclidean, cdist_penrose_radicand, periodogram_ordinates
from .errors import LengthMismatch, NegativeRadicand, SeriesTooShort

_RADICAND_CLAMP = -1e-12


class DistanceKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    PENROSE_SHAPE = "penrose"
    PERIODOGRAM = "periodogram"


def _pair(y, c):
    y = np.asarray(y, dtype=float)
    c = np.asarray(c, dtype=float)
    if y.shape != c.shape or y.ndim != 1:
        raise LengthMismatch(f"series lengths differ: {y.shape} vs {c.shape}")
    return y, c


def euclidean(y, c):
    y, c = _pair(y, c)
    return float(np.sqrt(np.sum((y - c) ** 2)))


def penrose_shape(y, c):
    """sqrt(n/(n-1) * (dbar^2 - q^2)), insensitive to a common level shift."""
    y, c = _pair(y, c)
    n = y.shape[0]
    if n < 2:
        raise SeriesTooShort("Penrose shape distance needs n >= 2")
    rad = float(cdist_penrose_radicand(y[None, :], c[None, :])[0, 0])
    return float(np.sqrt(_clamp_radicand(rad) * n / (n - 1)))


def _clamp_radicand(rad):
    # dbar^2 - q^2 is a variance; anything below round-off noise is a bug
    if rad < _RADICAND_CLAMP:
        raise NegativeRadicand(f"radicand {rad} below clamp threshold")
    return max(rad, 0.0)


def periodogram(y):
    """Periodogram ordinates at f_j = 2*pi*j/n, j = 1..n//2."""
    y = np.asarray(y, dtype=float)
    if y.shape[0] < 4:
        raise SeriesTooShort("periodogram needs n >= 4")
    return periodogram_ordinates(y)


def periodogram_distance(y, c):
    y, c = _pair(y, c)
    return float(np.sqrt(np.sum((periodogram(y) - periodogram(c)) ** 2)))


def distance_matrix(values, centers, kind):
    """(N, K) matrix of distances between series rows and center rows."""
    Y = np.atleast_2d(np.asarray(values, dtype=float))
    C = np.atleast_2d(np.asarray(centers, dtype=float))
    if Y.shape[1] != C.shape[1]:
        raise LengthMismatch(
            f"series length {Y.shape[1]} vs center length {C.shape[1]}"
        )
    if kind == DistanceKind.EUCLIDEAN:
        return cdist_euclidean(Y, C)
    if kind == DistanceKind.PENROSE_SHAPE:
        n = Y.shape[1]
        if n < 2:
            raise SeriesTooShort("Penrose shape distance needs n >= 2")
        rad = cdist_penrose_radicand(Y, C)
        if np.any(rad < _RADICAND_CLAMP):
            raise NegativeRadicand("negative radicand beyond round-off")
        return np.sqrt(np.maximum(rad, 0.0) * n / (n - 1))
    if kind == DistanceKind.PERIODOGRAM:
        if Y.shape[1] < 4:
            raise SeriesTooShort("periodogram needs n >= 4")
        PY = np.vstack([periodogram_ordinates(row) for row in Y])
        PC = np.vstack([periodogram_ordinates(row) for row in C])
        return cdist_euclidean(PY, PC)
    raise ValueError(f"unknown distance kind {kind!r}")
