"""Process matrix from the coefficient expansion, with the closed-form inverse."""

import numpy as np

from sqptlab import channels, frames, sic, sqpt

basis = frames.standard_basis(2, "pauli")
k = channels.random_channel(2, rank=2, seed=3)
truth = sqpt.chi_matrix(k, basis)

beta = sqpt.beta_op(basis, sic.sic_d2())
lam = sqpt.lambda_matrix(k, beta.frame)

closed = sqpt.solve_chi(lam, beta)
numeric = sqpt.solve_chi(lam, beta, method="numeric")
print("closed form vs LU:", np.abs(closed - numeric).max())
print("recovered vs true chi:", np.abs(closed - truth).max())
print("|det beta| =", abs(np.linalg.det(beta.matrix)).round(12))

# identity channel in the Pauli basis: only the I,I entry survives
print(sqpt.chi_matrix(channels.identity_channel(2), basis).real.round(12))
