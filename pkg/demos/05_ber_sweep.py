"""
Coded versus uncoded BER on the 3.0-5.0 MHz band
================================================

A short Monte-Carlo sweep with the reference parameters.  Use
``mvplc sweep --config configs/fig5.cfg`` for the full-length run.
"""

from mvplc.link_sim import reference_config, snr_at_ber, sweep

cfg = reference_config(snr_points=(4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0),
                   min_bits=100_000, max_bits=300_000, seed=7)
records = sweep(cfg)

print("band     snr  coded  bits     errors  ber       Eb/N0")
for r in records:
    print(f"{r.band}  {r.snr_db:4.1f}  {int(r.coded)}      {r.bits:<8d} {r.errors:<7d} "
          f"{r.ber:.2e}  {r.ebn0_db:5.2f}")

coded = [r for r in records if r.coded]
uncoded = [r for r in records if not r.coded]
a, b = snr_at_ber(coded, 1e-3), snr_at_ber(uncoded, 1e-3)
if a is not None and b is not None:
    print(f"BER 1e-3 reached at {a:.2f} dB coded and {b:.2f} dB uncoded: gain {b - a:.2f} dB")
