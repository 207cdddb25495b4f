"""
Middleton Class-A impulsive noise
=================================

Background Gaussian noise plus Poisson-gated impulses.  Most samples are
tiny; a few percent carry almost all of the power.
"""

import numpy as np
from scipy import stats

from mvplc.noise import NoiseParams, class_a_pdf, sample_noise, sigma_m2

params = NoiseParams(A=0.1, gamma=0.01, sigma2=1.0)

# Conditional variance with m active impulses.
for m in range(4):
    print(f"sigma_{m}^2 = {sigma_m2(params, m):.4e}")

frame = sample_noise(params, 10**6, seed=1)
x = frame.samples
print("empirical power", np.mean(np.abs(x) ** 2))
print("fraction of impulse-free parts", np.mean(frame.impulse_counts == 0), "vs", np.exp(-0.1))

# Share of the power carried by the loudest 10 % of samples.
p = np.sort(np.abs(x) ** 2)[::-1]
print("top 10% of samples carry", p[: len(p) // 10].sum() / p.sum())

# Compare bin probabilities of the real part with the density (each part
# carries half the power).  The density has a narrow Gaussian spike at zero,
# so integrate over each bin rather than sampling at the centre.
from scipy import integrate

half = params.with_power(params.sigma2 / 2)
edges = np.linspace(-3, 3, 13)
counts, _ = np.histogram(x.real, edges)
for lo, hi, n in zip(edges[:-1], edges[1:], counts):
    pts = [0.0] if lo < 0 < hi else None
    model = integrate.quad(lambda v: class_a_pdf(half, v), lo, hi, points=pts, limit=200)[0]
    print(f"[{lo:+.1f}, {hi:+.1f})  empirical {n / len(x):.4f}  model {model:.4f}")

# As gamma grows the impulses vanish and the noise becomes Gaussian.
for gamma in (0.01, 1.0, 1e9):
    s = sample_noise(NoiseParams(0.1, gamma, 1.0), 200_000, seed=2).samples.real
    print(f"gamma = {gamma:g}: kurtosis {stats.kurtosis(s, fisher=False):.2f}")
