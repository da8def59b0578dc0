"""Operator frames of ``d^2`` linearly independent operators and their duals.

For operators ``P_mu`` the superoperator ``P = sum_mu |P_mu>><<mu|`` has the
vectorized operators as columns.  The reciprocal (canonical dual) operators
are the columns of ``(P^-1)^dag``; equivalently ``|R_mu>> = F^-1 |P_mu>>``
with the frame operator ``F = P P^dag``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, FrameError, PovmError
from .vecrep import TOL

#: frames whose ``P`` has a larger 2-norm condition number are rejected
MAX_CONDITION = 1e10
#: completeness tolerance for POVMs built from user-supplied vectors
POVM_TOL = 1e-8


def _stack(ops):
    ops = np.array(ops, dtype=complex)
    if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
        raise ArgumentError(f"expected a list of square matrices, got shape {ops.shape}")
    d = ops.shape[1]
    if ops.shape[0] != d * d:
        raise ArgumentError(f"a frame on d={d} needs exactly {d * d} operators, got {ops.shape[0]}")
    return ops


def super_matrix(ops):
    """``P = sum_mu |P_mu>><<mu|``: column ``mu`` is ``vec(P_mu)``."""
    ops = np.asarray(ops)
    return ops.reshape(ops.shape[0], -1).T.copy()


def _condition(p):
    s = np.linalg.svd(p, compute_uv=False)
    return np.inf if s[-1] == 0 else s[0] / s[-1]


@dataclass(frozen=True, eq=False)
class OperatorFrame:
    """``d^2`` linearly independent operators and their reciprocal duals."""

    ops: np.ndarray
    superP: np.ndarray
    duals: np.ndarray
    condition: float

    @property
    def d(self):
        return self.ops.shape[1]

    @property
    def weights(self):
        return np.einsum("mii->m", self.ops)

    @property
    def superR(self):
        """``(P^-1)^dag``; column ``mu`` is ``vec(R_mu)``."""
        return super_matrix(self.duals)

    @property
    def inverse(self):
        """``P^-1``, whose rows are ``<<R_mu|``."""
        return self.superR.conj().T

    def frame_operator(self):
        return self.superP @ self.superP.conj().T

    def __len__(self):
        return self.ops.shape[0]


def build_frame(ops, max_condition=MAX_CONDITION):
    """Build an :class:`OperatorFrame`, computing duals by a linear solve.

    Raises:
        FrameError: the operators are (numerically) linearly dependent.
    """
    ops = _stack(ops)
    d = ops.shape[1]
    p = super_matrix(ops)
    cond = _condition(p)
    if not cond < max_condition:
        raise FrameError(
            f"operators are linearly dependent: condition number of P is {cond:.3g} (limit {max_condition:.0e})",
            condition_number=cond,
        )
    # P^dag X = I  =>  X = (P^-1)^dag
    r = np.linalg.solve(p.conj().T, np.eye(d * d))
    duals = r.T.reshape(d * d, d, d)
    for a in (ops, duals, p):
        a.setflags(write=False)
    return OperatorFrame(ops, p, duals, float(cond))


def frame_operator(ops):
    """``F = sum_mu |P_mu>><<P_mu|``."""
    p = super_matrix(np.asarray(ops))
    return p @ p.conj().T


def duals_via_frame_op(ops, max_condition=MAX_CONDITION):
    """Canonical duals ``|R_mu>> = F^-1 |P_mu>>`` through an explicit inverse of ``F``."""
    ops = _stack(ops)
    d = ops.shape[1]
    p = super_matrix(ops)
    # cond(F) = cond(P)^2 saturates in floating point, so test P itself
    cond = _condition(p)
    if not cond < max_condition:
        raise FrameError(f"frame operator is singular (condition number of P is {cond:.3g})", condition_number=cond)
    r = np.linalg.inv(p @ p.conj().T) @ p
    return r.T.reshape(d * d, d, d)


def check_biorthogonal(frame):
    """Max deviation of ``<<R_mu|P_nu>>`` from ``delta_mu,nu``."""
    g = frame.superR.conj().T @ frame.superP
    return np.abs(g - np.eye(len(frame))).max()


def check_resolution(frame):
    """Max deviation of ``sum_mu |R_mu>><<P_mu|`` from the identity."""
    s = frame.superR @ frame.superP.conj().T
    return np.abs(s - np.eye(len(frame))).max()


@dataclass(frozen=True, eq=False)
class OrthoBasis:
    """Hilbert-Schmidt orthonormal operator basis with ``U = sum |D_mu>><<mu|``."""

    ops: np.ndarray
    kind: str

    @property
    def d(self):
        return self.ops.shape[1]

    @property
    def superU(self):
        return super_matrix(self.ops)


def _gell_mann(d):
    ops = [np.eye(d) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            ops.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            ops.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        ops.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    return ops


def standard_basis(d, kind="matrix-units"):
    """Orthonormal operator basis.

    ``kind`` is ``"matrix-units"`` (``|i><j|`` at position ``d*i + j``) or
    ``"gell-mann"`` (alias ``"pauli"``: identity/sqrt(d) followed by the
    normalized generalized Gell-Mann matrices; for ``d = 2`` this is
    ``{I, X, Y, Z}/sqrt(2)``).
    """
    if d < 2:
        raise ArgumentError(f"d must be at least 2, got {d}")
    if kind == "matrix-units":
        ops = np.eye(d * d, dtype=complex).reshape(d * d, d, d)
    elif kind in ("gell-mann", "pauli"):
        ops = np.array(_gell_mann(d))
    else:
        raise ArgumentError(f"unsupported basis kind {kind!r}")
    ops.setflags(write=False)
    return OrthoBasis(ops, kind)


def orthobasis(ops, tol=TOL):
    """Wrap user-supplied operators as an :class:`OrthoBasis` after checking orthonormality."""
    ops = _stack(ops)
    u = super_matrix(ops)
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[1]), rtol=0, atol=tol):
        raise ArgumentError("operators are not Hilbert-Schmidt orthonormal")
    ops.setflags(write=False)
    return OrthoBasis(ops, "custom")


@dataclass(frozen=True, eq=False)
class Povm:
    """Rank-one POVM ``P_mu = w_mu |phi_mu><phi_mu|`` with ``d^2`` elements."""

    vectors: np.ndarray
    weights: np.ndarray

    @property
    def d(self):
        return self.vectors.shape[1]

    @property
    def projectors(self):
        return np.einsum("mi,mj->mij", self.vectors, self.vectors.conj())

    @property
    def elements(self):
        return self.weights[:, None, None] * self.projectors

    def conj(self):
        return Povm(self.vectors.conj(), self.weights)

    def as_frame(self):
        return build_frame(self.elements)

    def __len__(self):
        return self.vectors.shape[0]


def build_povm(vectors, weights, tol=POVM_TOL):
    """Validate ``d^2`` unit vectors and positive weights as a rank-one POVM.

    Raises:
        ArgumentError: wrong count, non-unit vectors or non-positive weights.
        PovmError: ``sum_mu w_mu |phi_mu><phi_mu|`` deviates from identity by more than ``tol``.
    """
    vectors = np.array(vectors, dtype=complex)
    weights = np.array(weights, dtype=float)
    if vectors.ndim != 2:
        raise ArgumentError(f"expected an (n, d) array of vectors, got shape {vectors.shape}")
    n, d = vectors.shape
    if n != d * d:
        raise ArgumentError(f"a rank-one IC-POVM on d={d} needs exactly {d * d} elements, got {n}")
    if weights.shape != (n,):
        raise ArgumentError(f"expected {n} weights, got shape {weights.shape}")
    if np.any(weights <= 0):
        raise ArgumentError("weights must be positive")
    norms = np.linalg.norm(vectors, axis=1)
    if np.abs(norms - 1).max() > tol:
        raise ArgumentError("vectors must have unit norm")
    total = np.einsum("m,mi,mj->ij", weights, vectors, vectors.conj())
    dev = np.abs(total - np.eye(d)).max()
    if dev > tol:
        raise PovmError(f"elements do not sum to the identity (max deviation {dev:.3g})", deviation=dev)
    vectors.setflags(write=False)
    weights.setflags(write=False)
    return Povm(vectors, weights)


def regularize_povm(vectors, weights):
    """Turn arbitrary vectors into a valid rank-one POVM.

    With ``S = sum w |v><v|`` the elements ``S^-1/2 w |v><v| S^-1/2`` sum to
    the identity; they are re-expressed as unit vectors with new weights.
    """
    vectors = np.asarray(vectors, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    s = np.einsum("m,mi,mj->ij", weights, vectors, vectors.conj())
    w, v = np.linalg.eigh(s)
    s_inv_half = (v / np.sqrt(w)) @ v.conj().T
    new = vectors @ s_inv_half.T
    norms = np.linalg.norm(new, axis=1)
    return build_povm(new / norms[:, None], weights * norms**2)
