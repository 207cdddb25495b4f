"""Parity puncturing for code rates 1/2 and 16/18.

Parity is handled per couple as four columns ``[p1, q1, p2, q2]`` (ENC1 then
ENC2).  A pattern is a periodic keep-mask over couples.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

RATE_HALF = Fraction(1, 2)
RATE_16_18 = Fraction(16, 18)

PATTERNS = {
    # p from both encoders on every couple
    RATE_HALF: np.array([[1, 0, 1, 0]], dtype=bool),
    # one p bit per 8 couples, alternating ENC1 / ENC2
    RATE_16_18: np.array([[1, 0, 0, 0]] + [[0, 0, 0, 0]] * 3
                         + [[0, 0, 1, 0]] + [[0, 0, 0, 0]] * 3, dtype=bool),
}


def parse_rate(rate) -> Fraction:
    if isinstance(rate, str):
        num, _, den = rate.partition("/")
        rate = Fraction(int(num), int(den)) if den else Fraction(rate)
    rate = Fraction(rate).limit_denominator(64)
    if rate not in PATTERNS:
        raise ValueError(f"unsupported code rate {rate}; use 1/2 or 16/18")
    return rate


def keep_mask(rate, n_couples: int) -> np.ndarray:
    """Boolean ``(n_couples, 4)`` mask of transmitted parity positions."""
    pattern = PATTERNS[parse_rate(rate)]
    reps = -(-n_couples // len(pattern))
    return np.tile(pattern, (reps, 1))[:n_couples]


def puncture(parity1: np.ndarray, parity2: np.ndarray, rate) -> np.ndarray:
    """Serialize kept parity bits couple by couple, ENC1 before ENC2."""
    parity = np.concatenate([np.asarray(parity1), np.asarray(parity2)], axis=1)
    return parity[keep_mask(rate, len(parity))]


def depuncture(values: np.ndarray, rate, n_couples: int, fill=0.0):
    """Inverse of :func:`puncture`; erased positions get ``fill`` (zero LLR)."""
    mask = keep_mask(rate, n_couples)
    values = np.asarray(values)
    if len(values) != mask.sum():
        raise ValueError(f"expected {mask.sum()} parity values, got {len(values)}")
    out = np.full((n_couples, 4), fill, dtype=np.result_type(values, type(fill)))
    out[mask] = values
    return out[:, :2], out[:, 2:]


def n_parity_kept(rate, n_couples: int) -> int:
    return int(keep_mask(rate, n_couples).sum())
