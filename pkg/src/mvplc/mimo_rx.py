"""Receiver: preamble LS channel estimation, MMSE detection, soft QPSK demapping.

Matrices here use the receive convention ``y = H x`` with ``H`` shaped
``(..., n_rx, n_tx)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ofdm_modem import OfdmConfig, SQRT_HALF

L_MAX = 30.0
RES_VAR_FLOOR = 1e-30

# Gray QPSK points and their (b0, b1) labels, matching ofdm_modem.qpsk_map
QPSK_LABELS = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])
QPSK_POINTS = SQRT_HALF * ((1 - 2 * QPSK_LABELS[:, 0]) + 1j * (1 - 2 * QPSK_LABELS[:, 1]))


@dataclass(frozen=True)
class ChannelEstimate:
    H: np.ndarray          # (n_subcarriers, n_rx, n_tx)
    noise_var: np.ndarray  # (n_rx,)


@dataclass(frozen=True)
class DetectionOutput:
    s_hat: np.ndarray    # (..., n_tx) unbiased symbol estimates
    res_var: np.ndarray  # (..., n_tx) residual interference plus noise


def pilot_matrix(n_tx: int = 3) -> np.ndarray:
    """``(n_tx, n_tx)`` DFT pilot matrix, rows are antennas, columns time slots.

    Every entry has unit magnitude and ``P P^H = n_tx I``.
    """
    i = np.arange(n_tx)
    return np.exp(-2j * np.pi * np.outer(i, i) / n_tx)


def preamble_grid(config: OfdmConfig, n_symbols: int | None = None) -> np.ndarray:
    """Training grid ``(n_streams, n_symbols, n_subcarriers)``; the pilot
    matrix repeats every ``n_streams`` OFDM symbols on every subcarrier."""
    n_tx = config.n_streams
    n_symbols = n_tx if n_symbols is None else n_symbols
    if n_symbols < n_tx:
        raise ValueError(f"preamble needs at least {n_tx} OFDM symbols")
    P = pilot_matrix(n_tx)
    cols = P[:, np.arange(n_symbols) % n_tx]
    return np.repeat(cols[:, :, None], config.n_subcarriers, axis=2)


def estimate_channel(rx_preamble, tx_preamble, noise_var=None,
                     estimate_noise: bool = False) -> ChannelEstimate:
    """Least-squares estimate per subcarrier, ``H = Y X^H (X X^H)^-1``.

    Parameters
    ----------
    rx_preamble : (n_rx, T, n_subcarriers)
    tx_preamble : (n_tx, T, n_subcarriers)
    noise_var : float or (n_rx,) array, optional
        Known noise power per receive phase.
    estimate_noise : bool
        Estimate the noise power from the LS residual instead; needs
        ``T > n_tx`` preamble symbols.
    """
    Y = np.moveaxis(np.asarray(rx_preamble), -1, 0)   # (N, n_rx, T)
    X = np.moveaxis(np.asarray(tx_preamble), -1, 0)   # (N, n_tx, T)
    n_rx, T = Y.shape[1:]
    n_tx = X.shape[1]
    if X.shape[2] != T:
        raise ValueError("rx and tx preambles span different numbers of symbols")
    gram = X @ np.conj(np.swapaxes(X, -1, -2))
    if np.any(np.linalg.cond(gram) > 1e12):
        raise np.linalg.LinAlgError("pilot matrix is singular on at least one subcarrier")
    cross = Y @ np.conj(np.swapaxes(X, -1, -2))
    # H gram = cross  ->  gram^T H^T = cross^T (gram is Hermitian)
    H = np.swapaxes(np.linalg.solve(np.swapaxes(gram, -1, -2), np.swapaxes(cross, -1, -2)), -1, -2)

    if estimate_noise:
        if T <= n_tx:
            raise ValueError("noise estimation needs more preamble symbols than streams")
        resid = Y - H @ X
        var = (np.abs(resid) ** 2).sum(axis=(0, 2)) / (Y.shape[0] * (T - n_tx))
    elif noise_var is not None:
        var = np.broadcast_to(np.asarray(noise_var, dtype=float), (n_rx,)).copy()
    else:
        raise ValueError("noise_var is required unless estimate_noise is set")
    if np.any(var <= 0):
        raise ValueError("noise variance must be positive")
    return ChannelEstimate(H=H, noise_var=var)


def mmse_filter(H, sigma2):
    """MMSE weights ``W = H^H (H H^H + D)^-1`` and the error covariance diagonal.

    ``D`` is ``diag(sigma2)`` (scalar or one value per receive phase).
    Returns ``W`` shaped ``(..., n_tx, n_rx)`` and ``e`` shaped ``(..., n_tx)``
    where ``e_k = 1 - (W H)_kk``.
    """
    H = np.asarray(H, dtype=complex)
    n_rx, n_tx = H.shape[-2:]
    sigma2 = np.broadcast_to(np.asarray(sigma2, dtype=float), (n_rx,))
    if np.any(sigma2 <= 0):
        raise ValueError("noise power must be positive")
    Hh = np.conj(np.swapaxes(H, -1, -2))
    A = H @ Hh + np.diag(sigma2)
    W = np.conj(np.swapaxes(np.linalg.solve(A, H), -1, -2))
    # I - W H = (I + H^H D^-1 H)^-1, computed directly to keep precision as D -> 0
    E = np.linalg.inv(np.eye(n_tx) + (Hh / sigma2) @ H)
    e = np.real(np.diagonal(E, axis1=-2, axis2=-1))
    return W, e


def mmse_detect(y, H, sigma2) -> DetectionOutput:
    """Unbiased MMSE estimates and their residual variances.

    ``y`` is ``(..., n_rx)`` and broadcasts against ``H`` ``(..., n_rx, n_tx)``.
    With bias ``mu_k = (W H)_kk`` the output is ``(W y)_k / mu_k`` and the
    residual variance is ``(1 - mu_k) / mu_k``, i.e. the inverse post-detection
    SINR for unit-power symbols.
    """
    W, e = mmse_filter(H, sigma2)
    y = np.asarray(y)
    z = (W @ y[..., None])[..., 0]
    mu = 1.0 - e
    s_hat = z / mu
    res_var = np.maximum(e / mu, RES_VAR_FLOOR)
    return DetectionOutput(s_hat=s_hat, res_var=np.broadcast_to(res_var, s_hat.shape))


def soft_demod(det: DetectionOutput, l_max: float = L_MAX) -> np.ndarray:
    """Per-bit LLRs ``ln P(b=1 | s_hat) / P(b=0 | s_hat)`` by enumerating the
    constellation with a complex Gaussian likelihood and uniform priors.

    Returns shape ``(..., 2)`` holding ``(b0, b1)`` per symbol, clipped to
    ``+-l_max``.
    """
    s_hat = np.asarray(det.s_hat)[..., None]
    var = np.asarray(det.res_var)[..., None]
    metric = -np.abs(s_hat - QPSK_POINTS) ** 2 / var
    llr = np.empty(s_hat.shape[:-1] + (2,))
    for j in range(2):
        ones = metric[..., QPSK_LABELS[:, j] == 1]
        zeros = metric[..., QPSK_LABELS[:, j] == 0]
        llr[..., j] = (np.logaddexp.reduce(ones, axis=-1)
                       - np.logaddexp.reduce(zeros, axis=-1))
    return np.clip(llr, -l_max, l_max)
