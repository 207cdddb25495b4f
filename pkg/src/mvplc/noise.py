"""Middleton Class-A impulsive noise: sampler and amplitude density."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class NoiseParams:
    """Class-A parameters.

    A : impulse index (mean number of active impulses)
    gamma : Gaussian factor, background power over impulsive power
    sigma2 : total noise power, background plus impulsive
    """

    A: float = 0.1
    gamma: float = 0.01
    sigma2: float = 1.0

    def __post_init__(self):
        for name in ("A", "gamma", "sigma2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"NoiseParams.{name} must be positive, got {value!r}")

    @property
    def sigma_g2(self) -> float:
        """Background (Gaussian) power."""
        return self.sigma2 * self.gamma / (1.0 + self.gamma)

    @property
    def sigma_i2(self) -> float:
        """Impulsive power."""
        return self.sigma2 / (1.0 + self.gamma)

    def with_power(self, sigma2: float) -> "NoiseParams":
        return NoiseParams(self.A, self.gamma, sigma2)


@dataclass(frozen=True)
class NoiseFrame:
    samples: np.ndarray         # (count,) complex
    impulse_counts: np.ndarray  # (count, 2) Poisson draws of the real and imaginary parts


def sigma_m2(params: NoiseParams, m) -> np.ndarray | float:
    """Variance of the Gaussian component conditioned on ``m`` active impulses."""
    m = np.asarray(m)
    if np.any(m < 0):
        raise ValueError("impulse count must be non-negative")
    out = params.sigma2 * (m / params.A + params.gamma) / (1.0 + params.gamma)
    return out.item() if out.ndim == 0 else out


def poisson_truncation(A: float, tail: float = 1e-12) -> int:
    """Smallest M with P(K > M) < ``tail`` for K ~ Poisson(A)."""
    M = 0
    while stats.poisson.sf(M, A) >= tail:
        M += 1
    return max(M, 1)


def class_a_pdf(params: NoiseParams, n, truncation: int | None = None):
    """Class-A amplitude density, a Poisson-weighted Gaussian mixture.

    The sum runs over m = 0..truncation; by default the truncation leaves
    less than 1e-12 of Poisson mass out.
    """
    n = np.asarray(n, dtype=float)
    if not np.all(np.isfinite(n)):
        raise ValueError("noise amplitude must be finite")
    if truncation is None:
        truncation = poisson_truncation(params.A)
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    m = np.arange(truncation + 1)
    weights = stats.poisson.pmf(m, params.A)
    var = np.asarray(sigma_m2(params, m))
    x = n[..., None]
    dens = weights / np.sqrt(2 * np.pi * var) * np.exp(-x**2 / (2 * var))
    out = dens.sum(axis=-1)
    return out.item() if out.ndim == 0 else out


def sample_noise(params: NoiseParams, count: int, seed=None) -> NoiseFrame:
    """Draw ``count`` complex Class-A samples.

    The real and imaginary parts are independent real Class-A processes
    ``x_g + sqrt(K) * w``, each carrying half of the total power:
    ``x_g`` has variance ``sigma_g2 / 2``, ``w`` has variance
    ``sigma_i2 / (2 A)`` and ``K`` is Poisson with mean ``A``, drawn afresh
    for every part of every sample.  ``impulse_counts`` is ``(count, 2)``.
    ``seed`` may be anything accepted by :func:`numpy.random.default_rng`,
    including a ``Generator``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    k = rng.poisson(params.A, size=(count, 2))
    xg = rng.standard_normal((count, 2))
    w = rng.standard_normal((count, 2))
    parts = (math.sqrt(params.sigma_g2 / 2) * xg
             + np.sqrt(k) * math.sqrt(params.sigma_i2 / (2 * params.A)) * w)
    return NoiseFrame(samples=parts[:, 0] + 1j * parts[:, 1], impulse_counts=k)
