"""Simulated benchmark generator: six cluster-specific functional models.

Each series draws its own random coefficients, a per-series random level
and an AR(1) disturbance path, on n equally spaced time points in [0, 1].
Every series owns a dedicated random stream keyed by (seed, series index),
so generation is bit-reproducible regardless of evaluation order.
"""

from dataclasses import dataclass

import numpy as np

from .core import Dataset
from .errors import ConfigError

DEFAULT_SIZES = (90, 50, 100, 25, 60, 35)


@dataclass(frozen=True)
class SimConfig:
    sizes: tuple = DEFAULT_SIZES
    n_points: int = 10
    sigma2_e: float = 0.08    # coefficient noise for most models
    sigma2_v: float = 0.85    # wider coefficient noise (saturation model)
    sigma2_u: float = 0.3     # per-series random level variance
    ar_coef: float = 0.5
    ar_var: float = 0.005     # AR(1) innovation variance
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if len(self.sizes) != 6 or any(s < 1 for s in self.sizes):
            raise ConfigError("need 6 positive cluster sizes")
        if min(self.sigma2_e, self.sigma2_v, self.sigma2_u, self.ar_var) <= 0:
            raise ConfigError("variances must be positive")
        if not abs(self.ar_coef) < 1:
            raise ConfigError("AR(1) coefficient must satisfy |phi| < 1")
        if self.n_points < 2:
            raise ConfigError("need at least 2 time points")


def _ar1_path(n, phi, innovation_var, rng):
    # started from the stationary distribution
    e = np.empty(n)
    e[0] = rng.normal(0.0, np.sqrt(innovation_var / (1.0 - phi * phi)))
    for j in range(1, n):
        e[j] = phi * e[j - 1] + rng.normal(0.0, np.sqrt(innovation_var))
    return e


def _mean_curve(cluster, x, rng, cfg):
    se = np.sqrt(cfg.sigma2_e)
    sv = np.sqrt(cfg.sigma2_v)
    if cluster == 1:
        alpha = rng.normal(np.sqrt(2.0), se)
        beta = rng.normal(4.0 * np.pi, se)
        return alpha + np.sin(beta * np.pi * x)
    if cluster == 2:
        delta = rng.normal(0.75, se)
        # keep the inverse-cube term away from the pole at 0
        while abs(delta) < 0.05:
            delta = rng.normal(0.75, se)
        iota = rng.normal(1.0, se)
        return x + delta**-3 + iota
    if cluster == 3:
        nu = rng.normal(0.0, se)
        return np.full_like(x, nu)
    if cluster == 4:
        zeta = rng.normal(2.0, se)
        return zeta + np.cos(zeta * np.pi * x)
    if cluster == 5:
        xi = rng.normal(2.0, sv)
        eta = rng.normal(4.0, sv)
        theta = rng.normal(6.0, se)
        return xi - eta * np.exp(-theta * x)
    if cluster == 6:
        return -3.0 * (x - 0.5)
    raise ValueError(f"unknown cluster model {cluster}")


def generate(config: SimConfig):
    """Generate the benchmark dataset; returns (Dataset, labels in 1..6)."""
    x = np.linspace(0.0, 1.0, config.n_points)
    labels = np.repeat(np.arange(1, 7), config.sizes)
    rows = np.empty((labels.shape[0], config.n_points))
    for i, cluster in enumerate(labels):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, i)))
        mean = _mean_curve(int(cluster), x, rng, config)
        level = rng.normal(0.0, np.sqrt(config.sigma2_u))
        noise = _ar1_path(config.n_points, config.ar_coef, config.ar_var, rng)
        rows[i] = mean + level + noise
    data = Dataset.from_values(x, rows)
    return data, labels
