"""Probabilistic-distance clustering primitives.

Membership probabilities are tied to distances by the PD principle
P_{i,k} * d_{i,k} = constant per series, which yields

    P_{i,k} = prod_{h != k} d_{i,h} / sum_m prod_{h != m} d_{i,h}.

The row-wise products are evaluated in log space when all distances are
positive; exact zero distances short-circuit (probability mass splits
uniformly over the coinciding centers). The BC index is the K^K-scaled
mean row product of probabilities; beta is its un-normalized sum and the
boosting loss.
"""

import numpy as np

from .errors import NegativeDistance


def pd_probabilities(distances):
    """Membership probability matrix from an (N, K) distance matrix."""
    D = np.atleast_2d(np.asarray(distances, dtype=float))
    if np.any(D < 0) or not np.all(np.isfinite(D)):
        raise NegativeDistance("distances must be finite and nonnegative")
    if D.shape[1] < 2:
        raise ValueError("need at least 2 clusters")
    P = np.empty_like(D)
    zero = D == 0.0
    coincident = zero.any(axis=1)
    if coincident.any():
        z = zero[coincident]
        P[coincident] = z / z.sum(axis=1, keepdims=True)
    regular = ~coincident
    if regular.any():
        # prod_{h != k} d_h = exp(sum_h log d_h - log d_k); the row-wise
        # constant cancels in the normalization
        logw = -np.log(D[regular])
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        P[regular] = w / w.sum(axis=1, keepdims=True)
    return P


def bc_index(P):
    """Uncertainty of a partition: 0 for one-hot rows, 1 for uniform rows."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    return float(loss_beta(P)) / P.shape[0]


def loss_beta(P):
    """Boosting loss: sum_i (prod_k P_{i,k}) K^K, in [0, N]."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    K = P.shape[1]
    return float(np.sum(np.prod(P, axis=1)) * float(K) ** K)
