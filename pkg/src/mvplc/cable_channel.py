"""Coupled 3x3 channel of a three-phase MV underground cable.

Per-unit-length R, L, C, G matrices are built from the cable material and
geometry, the element-wise attenuation matrix is extracted from them, and a
multipath transfer-function matrix is synthesized over a frequency band.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

N_PHASES = 3


@dataclass(frozen=True)
class CableParams:
    """Material and geometry constants of the cable.

    Defaults describe a 1 km buried three-core section.  The coupling
    coefficient ``k`` and ground resistance ``r_0`` are not measured and are
    free parameters.
    """

    mu_c: float = 4 * math.pi * 1e-7
    sigma_c: float = 5.882e7
    D: float = 0.0197
    mu_0: float = 4 * math.pi * 1e-7
    eps_0: float = 2.2 / (36 * math.pi * 1e9)
    r: float = 0.003775
    tan_delta: float = 5.0e-4
    k: float = 0.3
    r_0: float = 0.0

    def __post_init__(self):
        for name in ("mu_c", "sigma_c", "D", "mu_0", "eps_0", "r", "tan_delta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"CableParams.{name} must be positive, got {value!r}")
        if not (math.isfinite(self.r_0) and self.r_0 >= 0):
            raise ValueError(f"CableParams.r_0 must be >= 0, got {self.r_0!r}")
        if not 0.0 <= self.k <= 1.0:
            raise ValueError(f"CableParams.k must lie in [0, 1], got {self.k!r}")
        if not self.D > 2 * self.r:
            raise ValueError("CableParams.D must exceed twice the conductor radius")

    @property
    def velocity(self) -> float:
        """Propagation speed in the dielectric, m/s."""
        return 1.0 / math.sqrt(self.mu_0 * self.eps_0)


@dataclass(frozen=True)
class RlgcMatrices:
    """Per-unit-length matrices at a single frequency ``f`` (Hz)."""

    R: np.ndarray
    L: np.ndarray
    C: np.ndarray
    G: np.ndarray
    f: float


def build_rlgc(params: CableParams, f: float) -> RlgcMatrices:
    """Per-unit-length R (ohm/m), L (H/m), C (F/m), G (S/m) at frequency ``f``."""
    if not (math.isfinite(f) and f > 0):
        raise ValueError(f"frequency must be positive, got {f!r}")
    ones = np.ones((N_PHASES, N_PHASES))
    eye = np.eye(N_PHASES)
    log_ratio = math.log(params.D / params.r)

    r_phase = 0.5 * math.sqrt(math.pi * f * params.mu_c / params.sigma_c)
    R = params.r_0 * ones + r_phase * eye

    # identical phases, so every mutual term is k * sqrt(l_ii * l_jj) = k * l_self
    l_self = params.mu_0 / (2 * math.pi) * log_ratio
    L = params.k * l_self * ones + (1 - params.k) * l_self * eye

    c_m = 4 * math.pi * params.eps_0
    c_ng = 2 * math.pi * params.eps_0 / log_ratio
    off = ones - eye
    C = -c_m * off + (c_ng + (N_PHASES - 1) * c_m) * eye

    g_m = 2 * math.pi * f * c_m * params.tan_delta
    g_ng = 2 * math.pi * f * c_ng * params.tan_delta
    G = -g_m * off + (g_ng + (N_PHASES - 1) * g_m) * eye

    return RlgcMatrices(R=R, L=L, C=C, G=G, f=float(f))


def attenuation_matrix(rlgc: RlgcMatrices, f: float | None = None) -> np.ndarray:
    """Element-wise attenuation constants alpha_ij in Np/m.

    ``Re(sqrt((R + jwL) .* (G + jwC)))`` with the principal square root, so
    every entry is non-negative.
    """
    if f is not None and not math.isclose(f, rlgc.f, rel_tol=1e-12):
        raise ValueError(f"RLGC matrices were built at {rlgc.f} Hz, not {f} Hz")
    omega = 2 * math.pi * rlgc.f
    z = rlgc.R + 1j * omega * rlgc.L
    y = rlgc.G + 1j * omega * rlgc.C
    alpha = np.sqrt(z * y).real
    return np.maximum(alpha, 0.0)


@dataclass(frozen=True)
class MultipathProfile:
    """Multipath echoes: gain ``g_p``, path length ``d_p`` (m), delay ``tau_p`` (s)."""

    gains: tuple[float, ...]
    lengths: tuple[float, ...]
    delays: tuple[float, ...]

    def __post_init__(self):
        n = len(self.gains)
        if n < 1:
            raise ValueError("multipath profile needs at least one path")
        if len(self.lengths) != n or len(self.delays) != n:
            raise ValueError("gains, lengths and delays must have equal length")
        if any(not d > 0 for d in self.lengths):
            raise ValueError("path lengths must be positive")
        if any(not t >= 0 for t in self.delays):
            raise ValueError("path delays must be non-negative")
        if any(b < a for a, b in zip(self.delays, self.delays[1:])):
            raise ValueError("path delays must be non-decreasing")

    @property
    def n_paths(self) -> int:
        return len(self.gains)

    @classmethod
    def from_lengths(cls, gains, lengths, velocity: float) -> "MultipathProfile":
        """Profile whose delays are path length over propagation speed."""
        lengths = tuple(float(d) for d in lengths)
        return cls(tuple(float(g) for g in gains), lengths,
                   tuple(d / velocity for d in lengths))

    @classmethod
    def default(cls, params: CableParams | None = None) -> "MultipathProfile":
        """Illustrative 4-path echo profile for a 1 km cable.

        Not measured data: the direct path plus three reflections with gains
        halving at each echo.
        """
        params = params or CableParams()
        return cls.from_lengths(
            gains=(0.6, 0.3, 0.15, 0.075),
            lengths=(1000.0, 1150.0, 1380.0, 1700.0),
            velocity=params.velocity,
        )


@dataclass(frozen=True)
class ChannelRealization:
    """Frequency-sampled 3x3 transfer matrices.

    ``H[k, i, j]`` is the transfer function from transmit phase ``i`` to
    receive phase ``j`` at ``freqs[k]``.  For the receive model ``y = A x``
    use :attr:`rx_matrix`, which is the per-frequency transpose.
    """

    band: tuple[float, float]
    freqs: np.ndarray
    H: np.ndarray = field(repr=False)

    @property
    def rx_matrix(self) -> np.ndarray:
        return np.swapaxes(self.H, -1, -2)

    @property
    def n_freqs(self) -> int:
        return len(self.freqs)

    @classmethod
    def identity(cls, band: tuple[float, float], n_samples: int) -> "ChannelRealization":
        freqs = subcarrier_grid(band, n_samples)
        H = np.broadcast_to(np.eye(N_PHASES, dtype=complex), (n_samples, N_PHASES, N_PHASES))
        return cls(band=tuple(band), freqs=freqs, H=H.copy())

    def to_csv(self, path) -> None:
        """Write one ``f_hz,i,j,re,im`` row per entry (phases numbered from 1)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["f_hz", "i", "j", "re", "im"])
            for f, mat in zip(self.freqs, self.H):
                for i in range(N_PHASES):
                    for j in range(N_PHASES):
                        h = mat[i, j]
                        writer.writerow([repr(float(f)), i + 1, j + 1,
                                         repr(float(h.real)), repr(float(h.imag))])


def subcarrier_grid(band: tuple[float, float], n_samples: int) -> np.ndarray:
    """``n_samples`` uniformly spaced frequencies ``f_low + k * (f_high - f_low) / n``."""
    f_low, f_high = band
    if n_samples < 2:
        raise ValueError("need at least two frequency samples")
    if not (0 < f_low < f_high):
        raise ValueError(f"invalid band {band!r}")
    return f_low + np.arange(n_samples) * ((f_high - f_low) / n_samples)


def transfer_matrix(alpha: np.ndarray, f: float, profile: MultipathProfile) -> np.ndarray:
    """Sum of attenuated, delayed echoes for each (i, j) at one frequency."""
    g = np.asarray(profile.gains)
    d = np.asarray(profile.lengths)
    tau = np.asarray(profile.delays)
    phase = np.exp(-2j * np.pi * f * tau)
    return np.einsum("p,ijp->ij", g * phase, np.exp(-alpha[..., None] * d))


def synthesize_channel(
    params: CableParams,
    profile: MultipathProfile,
    band: tuple[float, float],
    n_samples: int,
    sample_rate: float | None = None,
) -> ChannelRealization:
    """Evaluate the coupled multipath channel on a subcarrier-aligned grid.

    Parameters
    ----------
    band : (f_low, f_high)
        Frequency span in Hz; samples are ``f_low + k * (f_high - f_low) / n_samples``.
    sample_rate : float, optional
        If given, ``f_high`` must not exceed its Nyquist frequency.
    """
    if profile.n_paths < 1:
        raise ValueError("empty multipath profile")
    if sample_rate is not None and band[1] > sample_rate / 2:
        raise ValueError(f"band {band!r} exceeds the Nyquist frequency {sample_rate / 2}")
    freqs = subcarrier_grid(band, n_samples)
    H = np.empty((n_samples, N_PHASES, N_PHASES), dtype=complex)
    for n, f in enumerate(freqs):
        alpha = attenuation_matrix(build_rlgc(params, f))
        H[n] = transfer_matrix(alpha, f, profile)
    return ChannelRealization(band=(float(band[0]), float(band[1])), freqs=freqs, H=H)


def delay_spread_samples(profile: MultipathProfile, sample_rate: float) -> int:
    """Spread between the first and last echo, rounded up to whole samples."""
    spread = max(profile.delays) - min(profile.delays)
    return int(math.ceil(spread * sample_rate))
