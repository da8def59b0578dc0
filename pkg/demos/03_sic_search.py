"""Find Weyl-Heisenberg covariant SIC-POVMs by minimizing the frame potential."""

import time

import numpy as np

from sqptlab import sic

for d in range(2, 7):
    t0 = time.perf_counter()
    s, rep = sic.sic_search(d, seed=0)
    ov = sic.overlaps(s.vectors)
    off = ov[~np.eye(d * d, dtype=bool)]
    print(
        f"d={d}  potential {rep.potential:.10f}  (min {sic.min_frame_potential(d):.10f})"
        f"  overlaps in [{off.min():.8f}, {off.max():.8f}]  1/(d+1) = {1 / (d + 1):.8f}"
        f"  {time.perf_counter() - t0:.2f} s"
    )

# tight bound on the dual-frame trace, reached only by SICs
s3, _ = sic.sic_search(3, seed=1)
print("Tr K^-1 at d=3:", round(sic.k_inverse_trace(s3), 10), " bound:", sic.k_inverse_trace_bound(3))
print("perturbed POVM:", round(sic.k_inverse_trace(sic.perturbed_povm(s3, eps=0.05)), 6))
