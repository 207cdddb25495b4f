"""
The coupled 3x3 cable channel
=============================

Per-unit-length matrices of a three-phase underground cable, the
attenuation constants they imply, and the multipath transfer matrix sampled
on an OFDM subcarrier grid.
"""

import numpy as np

from mvplc.cable_channel import (CableParams, MultipathProfile, attenuation_matrix, build_rlgc,
                                 synthesize_channel)

# Material and geometry constants of the measured cable section.  k and r_0
# were not measured and are free parameters.
params = CableParams()
print(params)

# R and G grow with frequency (skin effect, dielectric loss); L and C do not.
for f in (0.5e6, 3e6, 6.5e6):
    m = build_rlgc(params, f)
    print(f"f = {f / 1e6:4.1f} MHz  r_1 = {m.R[0, 0]:.4e} ohm/m  g_11 = {m.G[0, 0]:.4e} S/m")

m = build_rlgc(params, 1e6)
print("L (H/m)\n", m.L)
print("C (F/m)\n", m.C)

# Element-wise attenuation constants.  Mutual entries come out orders of
# magnitude larger than the self terms, so after a kilometre of cable the
# crosstalk paths are attenuated to nothing.
alpha = attenuation_matrix(m)
print("alpha (Np/m)\n", alpha)
print("crosstalk over 1 km:", np.exp(-alpha[0, 1] * 1000.0))

# A four-path echo profile.  The default one is illustrative, not measured.
profile = MultipathProfile.default(params)
print("gains", profile.gains, "delays (us)", np.round(np.array(profile.delays) * 1e6, 3))

# Evaluate the channel on the 1024 subcarriers of the 3.0-5.0 MHz band.
ch = synthesize_channel(params, profile, (3.0e6, 3.0e6 + 2.048e6), 1024)
mag_db = 20 * np.log10(np.abs(ch.H[:, 0, 0]))
print(f"|H_11| over the band: min {mag_db.min():.1f} dB, max {mag_db.max():.1f} dB")
for k in range(0, 1024, 128):
    bar = "#" * int(max(mag_db[k] + 20, 0) * 2)
    print(f"{ch.freqs[k] / 1e6:6.3f} MHz {mag_db[k]:6.1f} dB {bar}")

# The realization can be exported for plotting elsewhere.
# ch.to_csv("channel_3-5MHz.csv")
