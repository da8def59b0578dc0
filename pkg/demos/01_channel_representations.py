"""Kraus operators, the Choi matrix and the transfer matrix of one channel."""

import numpy as np

from sqptlab import channels, vecrep

k = channels.amplitude_damping(0.4)
print("Kraus operators:", len(k))

# transfer matrix acts on row-stacked density matrices
lam = channels.lambda_c(k)
rho = np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, 0.7]])
out = vecrep.unvec(lam @ vecrep.vec(rho))
print("eps(rho) via transfer matrix:\n", out.round(4))
print("agrees with Kraus sum:", np.allclose(out, channels.apply(k, rho)))

# the Choi matrix is the transfer matrix with two indices swapped
chi = channels.chi_c(k)
print("reshuffle(lambda) == chi_c:", np.allclose(vecrep.reshuffle(lam), chi))
print("Tr chi_c =", np.trace(chi).real, " min eig =", np.linalg.eigvalsh(chi).min().round(12))

# back to Kraus form; the operators differ but the channel does not
k2 = channels.kraus_from_chi(chi)
print("round trip residual:", np.abs(channels.chi_c(k2) - chi).max())
