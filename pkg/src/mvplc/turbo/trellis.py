"""8-state duo-binary recursive systematic component code.

State vectors are rows ``[S1, S2, S3]`` with integer index ``4*S1 + 2*S2 + S3``;
a couple ``(u1, u2)`` has symbol index ``2*u1 + u2``.  Everything is linear
over GF(2):

    S' = S G + u1 a + u2 b
    p  = S . tap_p[:3] + u1 tap_p[3] + u2 tap_p[4]      (likewise q)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

N_STATES = 8
N_SYMBOLS = 4

# Order-7 state transition matrix; the remap matrices in codec.REMAP_MATRICES
# are exactly (I + G^(N mod 7))^-1 for this G.
FEEDBACK = ((0, 1, 0),
            (0, 0, 1),
            (1, 0, 1))


def state_to_bits(s: int) -> np.ndarray:
    return np.array([(s >> 2) & 1, (s >> 1) & 1, s & 1], dtype=np.int64)


def bits_to_state(bits) -> int:
    b = [int(x) & 1 for x in bits]
    if len(b) != 3:
        raise ValueError("encoder state has three bits")
    return 4 * b[0] + 2 * b[1] + b[2]


def gf2_inv(A: np.ndarray) -> np.ndarray:
    """Inverse of a square binary matrix over GF(2) by Gauss-Jordan."""
    A = np.asarray(A, dtype=np.int64) % 2
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if len(pivots) == 0:
            raise ValueError("matrix is singular over GF(2)")
        p = col + pivots[0]
        aug[[col, p]] = aug[[p, col]]
        for row in range(n):
            if row != col and aug[row, col]:
                aug[row] ^= aug[col]
    return aug[:, n:]


def gf2_matpow(A: np.ndarray, n: int) -> np.ndarray:
    out = np.eye(A.shape[0], dtype=np.int64)
    base = np.asarray(A, dtype=np.int64) % 2
    while n:
        if n & 1:
            out = out @ base % 2
        base = base @ base % 2
        n >>= 1
    return out


@dataclass(frozen=True)
class Trellis:
    """Tap set of the component encoder and its derived lookup tables."""

    feedback: tuple = FEEDBACK
    input_u1: tuple = (1, 1, 1)
    input_u2: tuple = (1, 1, 0)
    tap_p: tuple = (1, 1, 1, 1, 0)
    tap_q: tuple = (1, 1, 0, 1, 1)
    next_state: np.ndarray = field(init=False, repr=False, compare=False)
    parity: np.ndarray = field(init=False, repr=False, compare=False)
    predecessors: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        G = np.asarray(self.feedback, dtype=np.int64)
        a = np.asarray(self.input_u1, dtype=np.int64)
        b = np.asarray(self.input_u2, dtype=np.int64)
        tp = np.asarray(self.tap_p, dtype=np.int64)
        tq = np.asarray(self.tap_q, dtype=np.int64)
        ns = np.empty((N_STATES, N_SYMBOLS), dtype=np.int64)
        par = np.empty((N_STATES, N_SYMBOLS, 2), dtype=np.int64)
        for s in range(N_STATES):
            S = state_to_bits(s)
            for z in range(N_SYMBOLS):
                u1, u2 = z >> 1, z & 1
                ns[s, z] = bits_to_state((S @ G + u1 * a + u2 * b) % 2)
                par[s, z, 0] = (S @ tp[:3] + u1 * tp[3] + u2 * tp[4]) % 2
                par[s, z, 1] = (S @ tq[:3] + u1 * tq[3] + u2 * tq[4]) % 2
        if any(len(set(ns[s])) != N_SYMBOLS for s in range(N_STATES)):
            raise ValueError("each couple must lead to a distinct next state")
        object.__setattr__(self, "next_state", ns)
        prev_s = np.empty((N_STATES, N_SYMBOLS), dtype=np.int64)
        prev_z = np.empty((N_STATES, N_SYMBOLS), dtype=np.int64)
        fill = np.zeros(N_STATES, dtype=np.int64)
        for s in range(N_STATES):
            for z in range(N_SYMBOLS):
                t = ns[s, z]
                prev_s[t, fill[t]], prev_z[t, fill[t]] = s, z
                fill[t] += 1
        object.__setattr__(self, "predecessors", (prev_s, prev_z))
        object.__setattr__(self, "parity", par)

    def remap_matrix(self, n_couples: int) -> np.ndarray:
        """Matrix M with ``S0' = S_N M`` giving the circulation state.

        Raises if ``n_couples`` is a multiple of the feedback period, where no
        circulation state exists.
        """
        G = np.asarray(self.feedback, dtype=np.int64)
        A = (np.eye(3, dtype=np.int64) + gf2_matpow(G, n_couples)) % 2
        return gf2_inv(A)


DEFAULT_TRELLIS = Trellis()
