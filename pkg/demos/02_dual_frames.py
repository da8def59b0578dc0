"""Reciprocal operators of a non-orthogonal frame."""

import numpy as np

from sqptlab import frames, sic

s = sic.sic_d2()
fr = frames.build_frame(s.elements)
print("condition number of P:", round(fr.condition, 6))

# duals via a linear solve and via the frame operator coincide
print("dual construction gap:", np.abs(fr.duals - frames.duals_via_frame_op(s.elements)).max())
print("biorthogonality defect:", frames.check_biorthogonal(fr))

# SIC duals have a closed form: R = (d+1) Phi - I
print("closed form gap:", np.abs(fr.duals - sic.sic_duals(s)).max())

# any operator expands as X = sum <<R_mu|X>> P_mu
x = np.array([[1.0, 2j], [-1j, 0.5]])
coeffs = np.einsum("mij,ij->m", fr.duals.conj(), x)
print("expansion residual:", np.abs(np.einsum("m,mij->ij", coeffs, fr.ops) - x).max())

# duplicating an element destroys informational completeness
bad = np.array(s.elements)
bad[3] = bad[0]
try:
    frames.build_frame(bad)
except frames.FrameError as exc:
    print("rejected:", exc)
