"""QPSK mapping, 3-stream spatial multiplexing and CP-OFDM."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class OfdmConfig:
    n_subcarriers: int = 1024
    spacing: float = 2000.0
    cp_len: int = 128
    n_streams: int = 3

    def __post_init__(self):
        if self.n_subcarriers < 2:
            raise ValueError("n_subcarriers must be >= 2")
        if not self.spacing > 0:
            raise ValueError("subcarrier spacing must be positive")
        if self.cp_len < 0:
            raise ValueError("cp_len must be >= 0")
        if self.n_streams < 1:
            raise ValueError("n_streams must be >= 1")

    @property
    def sample_rate(self) -> float:
        return self.n_subcarriers * self.spacing

    @property
    def bandwidth(self) -> float:
        """Occupied bandwidth, subcarrier count times spacing."""
        return self.sample_rate

    @property
    def symbol_duration(self) -> float:
        """Useful symbol duration without the cyclic prefix."""
        return 1.0 / self.spacing

    @property
    def bits_per_ofdm_symbol(self) -> int:
        return 2 * self.n_streams * self.n_subcarriers

    def occupied_band(self, f_low: float) -> tuple[float, float]:
        return (f_low, f_low + self.bandwidth)


def qpsk_map(bits) -> np.ndarray:
    """Gray QPSK: ``(b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)``."""
    bits = np.asarray(bits).ravel()
    if len(bits) % 2:
        raise ValueError("QPSK needs an even number of bits")
    b = bits.reshape(-1, 2).astype(np.float64)
    return SQRT_HALF * ((1 - 2 * b[:, 0]) + 1j * (1 - 2 * b[:, 1]))


def qpsk_hard_demap(symbols) -> np.ndarray:
    s = np.asarray(symbols).ravel()
    out = np.empty((len(s), 2), dtype=np.int8)
    out[:, 0] = s.real < 0
    out[:, 1] = s.imag < 0
    return out.ravel()


def spatial_mux(symbols, config: OfdmConfig) -> np.ndarray:
    """Round-robin serial-to-parallel split, then blocks of ``n_subcarriers``.

    Returns an ``(n_streams, n_ofdm_symbols, n_subcarriers)`` grid; stream
    ``k`` holds the serial symbols with index ``k (mod n_streams)``.
    """
    symbols = np.asarray(symbols).ravel()
    per_symbol = config.n_streams * config.n_subcarriers
    if len(symbols) % per_symbol:
        raise ValueError(f"symbol count {len(symbols)} is not a multiple of {per_symbol}")
    streams = symbols.reshape(-1, config.n_streams).T
    return streams.reshape(config.n_streams, -1, config.n_subcarriers)


def spatial_demux(grid: np.ndarray, config: OfdmConfig) -> np.ndarray:
    grid = np.asarray(grid)
    if grid.shape[0] != config.n_streams or grid.shape[-1] != config.n_subcarriers:
        raise ValueError(f"grid shape {grid.shape} does not match the OFDM configuration")
    return grid.reshape(config.n_streams, -1).T.ravel()


def ofdm_modulate(rows, config: OfdmConfig) -> np.ndarray:
    """Orthonormal IFFT of each row of subcarrier symbols, then CP insertion.

    Works on any array whose last axis has ``n_subcarriers`` entries.
    """
    rows = np.asarray(rows)
    if rows.shape[-1] != config.n_subcarriers:
        raise ValueError(f"expected {config.n_subcarriers} subcarriers, got {rows.shape[-1]}")
    t = np.fft.ifft(rows, axis=-1, norm="ortho")
    if config.cp_len:
        t = np.concatenate([t[..., -config.cp_len:], t], axis=-1)
    return t


def ofdm_demodulate(samples, config: OfdmConfig) -> np.ndarray:
    samples = np.asarray(samples)
    n = config.n_subcarriers + config.cp_len
    if samples.shape[-1] != n:
        raise ValueError(f"expected {n} samples per OFDM symbol, got {samples.shape[-1]}")
    return np.fft.fft(samples[..., config.cp_len:], axis=-1, norm="ortho")
