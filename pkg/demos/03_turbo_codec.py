"""
Duo-binary tail-biting turbo code
=================================

Encode one PHY block, check that both component encoders end where they
started, and decode over a BPSK/AWGN channel.
"""

import numpy as np

from mvplc.turbo import TurboConfig, decode, encode

cfg = TurboConfig(pb_size=264, rate="1/2")
print(cfg, "info bits", cfg.n_info_bits, "coded bits", cfg.n_coded_bits)

rng = np.random.default_rng(0)
info = rng.integers(0, 2, cfg.n_info_bits)
block = encode(info, cfg)

# Pass 1 from the zero state gives S_N; the remap matrix turns it into the
# circulation state, and pass 2 from there returns to the same state.
for name, tr in zip(("ENC1", "ENC2"), block.traces):
    print(name, "S_N", tr.final_pass1, "-> S_0'", tr.initial, "-> end of pass 2", tr.final_pass2)

# BPSK over AWGN.  LLRs are ln P(1)/P(0).
for ebn0_db in (0.0, 0.5, 1.0, 1.5):
    sigma = np.sqrt(1 / (2 * float(cfg.rate) * 10 ** (ebn0_db / 10)))
    errors = raw = 0
    n_blocks = 20
    for _ in range(n_blocks):
        info = rng.integers(0, 2, cfg.n_info_bits)
        y = (2.0 * encode(info, cfg).bits - 1) + sigma * rng.standard_normal(cfg.n_coded_bits)
        llr = 2 * y / sigma**2
        errors += np.count_nonzero(decode(llr, cfg) != info)
        raw += np.count_nonzero((llr[:cfg.n_info_bits] > 0) != info)
    n = n_blocks * cfg.n_info_bits
    print(f"Eb/N0 {ebn0_db:3.1f} dB  uncoded BER {raw / n:.2e}  decoded BER {errors / n:.2e}")

# The punctured rate 16/18 keeps one parity bit per 8 couples.
hi = TurboConfig(pb_size=264, rate="16/18")
print("rate 16/18 codeword length", hi.n_coded_bits)
