"""Reconstruct the depolarizing channel from exact SIC data."""

import numpy as np

from sqptlab import channels, sic, sqpt
from sqptlab.errors import ConsistencyError

s = sic.sic_d2()
for q in (0.0, 0.3, 1.0):
    data = sqpt.omega_exact(channels.depolarizing(2, q), s, s)
    chi = sqpt.reconstruct_chi_sic(data, s)
    short = sqpt.reconstruct_chi_sic(data, s, unital=True)
    print(f"q={q}:  general {np.abs(chi - sqpt.werner_chi(2, q)).max():.1e}  unital {np.abs(short - chi).max():.1e}")

# the unital shortcut is refused for a non-unital channel
data = sqpt.omega_exact(channels.amplitude_damping(0.4), s, s)
try:
    sqpt.reconstruct_chi_sic(data, s, unital=True)
except ConsistencyError as exc:
    print("amplitude damping:", exc)
