"""Log-domain BCJR for the duo-binary tail-biting component code.

LLR convention throughout: ``L = ln P(bit=1) / P(bit=0)``.  Branch metrics
therefore add ``L`` for every 1-bit on the branch.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .trellis import N_STATES, N_SYMBOLS, Trellis

NEG_INF = -np.inf


@njit(cache=True)
def _lse(vals, n, max_log):
    """log(sum(exp(vals[:n]))), or the max under the max-log approximation."""
    im = 0
    for i in range(1, n):
        if vals[i] > vals[im]:
            im = i
    m = vals[im]
    if max_log or m == NEG_INF:
        return m
    acc = 1.0
    for i in range(n):
        if i != im:
            acc += math.exp(vals[i] - m)
    return m + math.log(acc)


@njit(cache=True)
def _shift(metric, k):
    m = metric[k, 0]
    for s in range(1, N_STATES):
        if metric[k, s] > m:
            m = metric[k, s]
    for s in range(N_STATES):
        metric[k, s] -= m


@njit(cache=True)
def branch_metrics(sys_llr, par_llr, apriori, parity):
    K = sys_llr.shape[0]
    gamma = np.empty((K, N_STATES, N_SYMBOLS))
    for k in range(K):
        for z in range(N_SYMBOLS):
            base = apriori[k, z] + (z >> 1) * sys_llr[k, 0] + (z & 1) * sys_llr[k, 1]
            for s in range(N_STATES):
                gamma[k, s, z] = (base + parity[s, z, 0] * par_llr[k, 0]
                                  + parity[s, z, 1] * par_llr[k, 1])
    return gamma


@njit(cache=True)
def forward(gamma, prev_state, prev_symbol, init, normalize, max_log):
    K = gamma.shape[0]
    alpha = np.empty((K + 1, N_STATES))
    alpha[0] = init
    vals = np.empty(N_SYMBOLS)
    for k in range(K):
        for t in range(N_STATES):
            for i in range(N_SYMBOLS):
                s = prev_state[t, i]
                vals[i] = alpha[k, s] + gamma[k, s, prev_symbol[t, i]]
            alpha[k + 1, t] = _lse(vals, N_SYMBOLS, max_log)
        if normalize:
            _shift(alpha, k + 1)
    return alpha


@njit(cache=True)
def backward(gamma, next_state, final, normalize, max_log):
    K = gamma.shape[0]
    beta = np.empty((K + 1, N_STATES))
    beta[K] = final
    vals = np.empty(N_SYMBOLS)
    for k in range(K - 1, -1, -1):
        for s in range(N_STATES):
            for z in range(N_SYMBOLS):
                vals[z] = gamma[k, s, z] + beta[k + 1, next_state[s, z]]
            beta[k, s] = _lse(vals, N_SYMBOLS, max_log)
        if normalize:
            _shift(beta, k)
    return beta


@njit(cache=True)
def symbol_posterior(alpha, beta, gamma, next_state, max_log):
    K = gamma.shape[0]
    post = np.empty((K, N_SYMBOLS))
    vals = np.empty(N_STATES)
    for k in range(K):
        for z in range(N_SYMBOLS):
            for s in range(N_STATES):
                vals[s] = alpha[k, s] + gamma[k, s, z] + beta[k + 1, next_state[s, z]]
            post[k, z] = _lse(vals, N_STATES, max_log)
    return post


WARMUP_COUPLES = 64


def siso(sys_llr, par_llr, apriori, trellis: Trellis, max_log: bool = False,
         boundary: str = "wrap", warmup: int = WARMUP_COUPLES) -> np.ndarray:
    """Per-couple log posterior ``ln P(z | r)`` up to a per-couple constant.

    Parameters
    ----------
    sys_llr, par_llr : (K, 2) arrays
        Channel LLRs of ``(u1, u2)`` and ``(p, q)``; zero marks an erasure.
    apriori : (K, 4) array
        A-priori log probabilities of each couple symbol.
    boundary : {"wrap", "exact"}
        ``"wrap"`` starts both recursions from uniform metrics and runs one
        wrap-around warm-up pass over ``warmup`` couples: the forward
        recursion is primed on the tail of the block, the backward recursion
        on its head.  ``"exact"`` sums the trellis over every
        circulation state separately, which is the exact tail-biting MAP but
        costs eight passes.

    Returns
    -------
    (K, 4) array normalized so column 0 is zero.
    """
    sys_llr = np.ascontiguousarray(sys_llr, dtype=np.float64)
    par_llr = np.ascontiguousarray(par_llr, dtype=np.float64)
    apriori = np.ascontiguousarray(apriori, dtype=np.float64)
    ns = trellis.next_state
    ps, pz = trellis.predecessors
    gamma = branch_metrics(sys_llr, par_llr, apriori, trellis.parity)
    if boundary == "wrap":
        uniform = np.zeros(N_STATES)
        w = min(max(int(warmup), 1), len(gamma))
        warm_a = forward(gamma[len(gamma) - w:], ps, pz, uniform, True, max_log)
        alpha = forward(gamma, ps, pz, warm_a[-1], True, max_log)
        warm_b = backward(gamma[:w], ns, uniform, True, max_log)
        beta = backward(gamma, ns, warm_b[0], True, max_log)
        post = symbol_posterior(alpha, beta, gamma, ns, max_log)
    elif boundary == "exact":
        post = np.full((len(gamma), N_SYMBOLS), NEG_INF)
        for s0 in range(N_STATES):
            delta = np.full(N_STATES, NEG_INF)
            delta[s0] = 0.0
            alpha = forward(gamma, ps, pz, delta, False, False)
            beta = backward(gamma, ns, delta, False, False)
            post = np.logaddexp(post, symbol_posterior(alpha, beta, gamma, ns, False))
    else:
        raise ValueError(f"unknown boundary mode {boundary!r}")
    return post - post[:, :1]


def symbol_to_bit_llr(post: np.ndarray) -> np.ndarray:
    """Marginal ``(u1, u2)`` LLRs from ``(K, 4)`` couple log posteriors."""
    l1 = np.logaddexp(post[:, 2], post[:, 3]) - np.logaddexp(post[:, 0], post[:, 1])
    l2 = np.logaddexp(post[:, 1], post[:, 3]) - np.logaddexp(post[:, 0], post[:, 2])
    return np.stack([l1, l2], axis=1)
