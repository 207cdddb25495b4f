"""Tail-biting duo-binary turbo encoder and iterative decoder."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from . import puncture as punct
from .bcjr import siso, symbol_to_bit_llr
from .interleaver import (PairInterleaver, default_seed, permutation_file,
                          read_permutation, s_random_permutation)
from .trellis import DEFAULT_TRELLIS, Trellis, bits_to_state, state_to_bits

PB_SIZES = (16, 72, 136, 264, 520)

# couples per PHY block, i.e. half the number of information bits
INTERLEAVE_LEN = {16: 64, 72: 288, 136: 544, 264: 1056, 520: 2080}

REMAP_MATRICES = {
    264: ((1, 0, 1), (1, 1, 1), (1, 1, 0)),
    16: ((0, 0, 1), (1, 0, 1), (1, 1, 1)),
    72: ((0, 0, 1), (1, 0, 1), (1, 1, 1)),
    520: ((0, 0, 1), (1, 0, 1), (1, 1, 1)),
    136: ((0, 1, 1), (1, 0, 0), (0, 1, 0)),
}

EXTRINSIC_CLIP = 100.0


class TurboConfig:
    """Block size, rate and decoder settings.

    Standard blocks are selected by ``pb_size`` (bytes).  Passing
    ``pb_size=None`` with ``interleave_len`` builds a non-standard block (used
    for small exhaustive checks); its remap matrix is derived from the trellis
    and its interleaver is generated from ``seed``.
    """

    def __init__(self, pb_size: int | None = 264, rate="1/2", iterations: int = 8,
                 max_log: bool = False, early_stop: bool = True,
                 trellis: Trellis = DEFAULT_TRELLIS, interleave_len: int | None = None,
                 interleaver=None, seed: int | None = None):
        self.rate = punct.parse_rate(rate)
        if iterations < 1:
            raise ValueError("iterations must be >= 1")
        self.iterations = int(iterations)
        self.max_log = bool(max_log)
        self.early_stop = bool(early_stop)
        self.trellis = trellis
        self.pb_size = pb_size
        if pb_size is not None:
            if pb_size not in PB_SIZES:
                raise ValueError(f"unsupported PB_Size {pb_size}; expected one of {PB_SIZES}")
            n = INTERLEAVE_LEN[pb_size]
            if interleave_len is not None and interleave_len != n:
                raise ValueError(f"PB_Size {pb_size} has interleaving length {n}")
            self.remap_matrix = np.array(REMAP_MATRICES[pb_size], dtype=np.int64)
            if interleaver is None:
                _, interleaver = read_permutation(permutation_file(pb_size))
        else:
            if interleave_len is None or interleave_len < 1:
                raise ValueError("interleave_len is required when pb_size is None")
            n = int(interleave_len)
            self.remap_matrix = trellis.remap_matrix(n)
            if interleaver is None:
                interleaver = s_random_permutation(n, seed=default_seed(n) if seed is None else seed)
        self.interleave_len = n
        self.interleaver = (interleaver if isinstance(interleaver, PairInterleaver)
                            else PairInterleaver(interleaver))
        if len(self.interleaver) != n:
            raise ValueError("interleaver length does not match the block")
        coded = Fraction(2 * n) / self.rate
        if coded.denominator != 1:
            raise ValueError(f"rate {self.rate} does not divide a {2 * n}-bit block")

    @property
    def n_info_bits(self) -> int:
        return 2 * self.interleave_len

    @property
    def n_coded_bits(self) -> int:
        return int(Fraction(self.n_info_bits) / self.rate)

    def __repr__(self):
        return (f"TurboConfig(pb_size={self.pb_size}, rate={self.rate}, "
                f"interleave_len={self.interleave_len}, iterations={self.iterations}, "
                f"max_log={self.max_log})")


@dataclass(frozen=True)
class ComponentTrace:
    """Encoder states of one component encoder for one block."""

    final_pass1: tuple   # S_N from the all-zero start
    initial: tuple       # S_0' = S_N M
    final_pass2: tuple   # S_N', equal to S_0' for a valid block


@dataclass(frozen=True)
class CodedBlock:
    systematic: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    bits: np.ndarray
    traces: tuple[ComponentTrace, ComponentTrace]


@njit(cache=True)
def _run_encoder(symbols, state, next_state, parity):
    out = np.empty((symbols.shape[0], 2), dtype=np.int8)
    for k in range(symbols.shape[0]):
        z = symbols[k]
        out[k, 0] = parity[state, z, 0]
        out[k, 1] = parity[state, z, 1]
        state = next_state[state, z]
    return out, state


def tailbite_init(final_state, config: TurboConfig) -> tuple:
    """Circulation state ``S_N M`` over GF(2), row vector times matrix."""
    s = np.asarray(final_state, dtype=np.int64)
    if s.shape != (3,):
        raise ValueError("encoder state has three bits")
    return tuple(int(x) for x in s @ config.remap_matrix % 2)


def encode_component(couples: np.ndarray, config: TurboConfig):
    """Two-pass tail-biting encoding of ``(K, 2)`` couples.

    Returns the ``(K, 2)`` parity ``(p, q)`` of the second pass and its trace.
    """
    couples = np.asarray(couples, dtype=np.int64)
    symbols = 2 * couples[:, 0] + couples[:, 1]
    t = config.trellis
    _, s_n = _run_encoder(symbols, 0, t.next_state, t.parity)
    s0 = tailbite_init(state_to_bits(s_n), config)
    par, s_end = _run_encoder(symbols, bits_to_state(s0), t.next_state, t.parity)
    trace = ComponentTrace(tuple(int(x) for x in state_to_bits(s_n)), s0,
                           tuple(int(x) for x in state_to_bits(s_end)))
    return par, trace


def pair_interleave(pairs, config: TurboConfig) -> np.ndarray:
    return config.interleaver.interleave(pairs)


def pair_deinterleave(pairs, config: TurboConfig) -> np.ndarray:
    return config.interleaver.deinterleave(pairs)


def encode(info_bits, config: TurboConfig) -> CodedBlock:
    """Encode one block.

    The codeword is the systematic bits in order, followed by the punctured
    parity serialized couple by couple.
    """
    bits = np.asarray(info_bits, dtype=np.int8).ravel()
    if len(bits) != config.n_info_bits:
        raise ValueError(f"expected {config.n_info_bits} info bits, got {len(bits)}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("info bits must be 0 or 1")
    couples = bits.reshape(-1, 2)
    par1, tr1 = encode_component(couples, config)
    par2, tr2 = encode_component(pair_interleave(couples, config), config)
    mask = punct.keep_mask(config.rate, config.interleave_len)
    parity = punct.puncture(par1, par2, config.rate)
    codeword = np.concatenate([bits, parity]).astype(np.int8)
    return CodedBlock(systematic=bits.copy(), parity1=par1[mask[:, :2]],
                      parity2=par2[mask[:, 2:]], bits=codeword, traces=(tr1, tr2))


def _systematic_metric(sys_llr: np.ndarray) -> np.ndarray:
    z = np.arange(4)
    return np.outer(sys_llr[:, 0], z >> 1) + np.outer(sys_llr[:, 1], z & 1)


def decode(channel_llrs, config: TurboConfig, return_llr: bool = False):
    """Iterative turbo decoding of one block of channel LLRs.

    ``channel_llrs`` follows the codeword layout of :func:`encode` with
    ``ln P(1)/P(0)`` sign.  Returns hard info bits, and the posterior info-bit
    LLRs when ``return_llr`` is true.
    """
    llrs = np.asarray(channel_llrs, dtype=np.float64).ravel()
    if len(llrs) != config.n_coded_bits:
        raise ValueError(f"expected {config.n_coded_bits} LLRs, got {len(llrs)}")
    n = config.interleave_len
    sys1 = llrs[:2 * n].reshape(n, 2)
    par1, par2 = punct.depuncture(llrs[2 * n:], config.rate, n)
    sys2 = config.interleaver.interleave(sys1)
    sysm1, sysm2 = _systematic_metric(sys1), _systematic_metric(sys2)
    kw = dict(trellis=config.trellis, max_log=config.max_log)

    la1 = np.zeros((n, 4))
    final = None
    for it in range(config.iterations):
        post1 = siso(sys1, par1, la1, **kw)
        le1 = np.clip(post1 - la1 - sysm1, -EXTRINSIC_CLIP, EXTRINSIC_CLIP)
        la2 = config.interleaver.interleave_symbols(le1)
        post2 = siso(sys2, par2, la2, **kw)
        le2 = np.clip(post2 - la2 - sysm2, -EXTRINSIC_CLIP, EXTRINSIC_CLIP)
        la1 = config.interleaver.deinterleave_symbols(le2)
        final = config.interleaver.deinterleave_symbols(post2)
        if config.early_stop and it >= 1:
            if np.array_equal(final.argmax(axis=1), post1.argmax(axis=1)):
                break
    llr = symbol_to_bit_llr(final).ravel()
    bits = (llr > 0).astype(np.int8)
    return (bits, llr) if return_llr else bits
