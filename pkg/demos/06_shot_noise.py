"""Finite-shot error against the predicted (Delta_p - Tr rho^2)/N law."""

import numpy as np

from sqptlab import experiment, sic, sqpt

spec = {"kind": "depolarizing", "d": 2, "q": 0.3}
res = experiment.mse_sweep(spec, [10**3, 10**4, 10**5], trials=200, seed=1)
print(f"{'N':>8} {'mean err':>12} {'predicted':>12} {'z':>7}")
for row in res.summary:
    print(f"{row['shots']:>8} {row['mean_err']:12.4e} {row['predicted']:12.4e} {row['z']:7.2f}")
print("log-log slope:", round(res.slope, 3))

# the product SIC gives the same Delta_p for every state
pf = sqpt.product_frame(sic.sic_d2(), sic.sic_d2())
print("Delta_avg =", round(sqpt.delta_avg(pf), 10), sqpt.delta_constants(2))

# preparing each input separately has its own prediction
res = experiment.mse_sweep({"kind": "amplitude-damping", "gamma": 0.4}, [10**3, 10**4], trials=200, seed=2, mode="per-input")
for row in res.summary:
    print(f"per-input N={row['shots']}: z = {row['z']:.2f}")
print("min eigenvalue of the estimate:", round(np.linalg.eigvalsh(res.chi_hat).min(), 5))
