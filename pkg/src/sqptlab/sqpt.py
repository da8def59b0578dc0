"""Standard process tomography in the vectorized picture.

Notation (all superoperators ``d^2 x d^2``):

* ``U`` has the orthonormal basis operators ``D_mu`` as columns and
  ``chi = U^dag chi_c U`` holds the process coefficients in that basis;
* ``P`` has the input operators ``P_nu`` as columns and
  ``lambda = P^-1 lambda_c P`` expands each output ``eps(P_nu)`` over the inputs;
* ``beta = (P^-1 kron P^T) B (U kron U^*)`` with ``B`` the reshuffle
  permutation links them, ``vec2(lambda) = beta vec2(chi)``, and has the closed
  form inverse ``(U^dag kron U^T) B (P kron (P^-1)^T)``.

Data from an experiment with input POVM ``{P_nu}`` and measurement POVM
``{Pbar_mu}`` is the matrix ``omega_{mu,nu} = Tr[Pbar_mu eps(P_nu)]``, from which
``lambda_c = (Pbar^-1)^dag omega P^-1`` and
``chi_c = sum omega_{mu,nu} Rbar_mu kron conj(R_nu)``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import channels
from .errors import ArgumentError, ConsistencyError, SolveError
from .frames import OperatorFrame, OrthoBasis, Povm, build_frame
from .sic import SicPovm
from .vecrep import beta_swap, reshuffle, vec

#: ``beta`` is materialized only up to this dimension
MAX_DENSE_D = 3


def _as_frame(obj):
    if isinstance(obj, OperatorFrame):
        return obj
    if isinstance(obj, (Povm, SicPovm)):
        return build_frame(obj.elements)
    return build_frame(obj)


def _check_d(k, d):
    if k.d != d:
        raise ArgumentError(f"channel dimension {k.d} does not match {d}")


def chi_matrix(k, basis):
    """Process matrix of channel ``k`` in an orthonormal operator basis."""
    _check_d(k, basis.d)
    u = basis.superU
    return u.conj().T @ channels.chi_c(k) @ u


def chi_c_from_chi(chi, basis):
    u = basis.superU
    return u @ chi @ u.conj().T


def lambda_matrix(k, frame):
    """Expansion coefficients ``eps(P_nu) = sum_mu lambda_{mu,nu} P_mu``."""
    frame = _as_frame(frame)
    _check_d(k, frame.d)
    return frame.inverse @ channels.lambda_c(k) @ frame.superP


def resynthesize(chi, basis, rho):
    """``sum_{mu,nu} chi_{mu,nu} D_mu rho D_nu^dag``."""
    d_ops = basis.ops
    return np.einsum("mn,mij,jk,nlk->il", chi, d_ops, rho, d_ops.conj())


@dataclass(frozen=True, eq=False)
class BetaOp:
    """Linear map ``vec2(chi) -> vec2(lambda)`` for a basis/frame pair.

    :meth:`apply` and :meth:`solve` work in factored form for any ``d``;
    :attr:`matrix` and :meth:`inverse_matrix` materialize ``d^4 x d^4`` arrays and
    are limited to ``d <= MAX_DENSE_D``.
    """

    basis: OrthoBasis
    frame: OperatorFrame

    @property
    def d(self):
        return self.basis.d

    def _dense_guard(self):
        if self.d > MAX_DENSE_D:
            raise ArgumentError(f"beta is not materialized for d={self.d} > {MAX_DENSE_D}; use apply()/solve()")

    @property
    def matrix(self):
        self._dense_guard()
        p, pinv, u = self.frame.superP, self.frame.inverse, self.basis.superU
        return np.kron(pinv, p.T) @ beta_swap(self.d) @ np.kron(u, u.conj())

    def inverse_matrix(self):
        """Closed-form ``beta^-1 = (U^dag kron U^T) B (P kron (P^-1)^T)``."""
        self._dense_guard()
        p, pinv, u = self.frame.superP, self.frame.inverse, self.basis.superU
        return np.kron(u.conj().T, u.T) @ beta_swap(self.d) @ np.kron(p, pinv.T)

    def apply(self, chi):
        """``lambda = P^-1 reshuffle(U chi U^dag) P``."""
        u = self.basis.superU
        return self.frame.inverse @ reshuffle(u @ chi @ u.conj().T) @ self.frame.superP

    def solve(self, lam):
        """``chi = U^dag reshuffle(P lambda P^-1) U``."""
        u = self.basis.superU
        return u.conj().T @ reshuffle(self.frame.superP @ lam @ self.frame.inverse) @ u

    def entry(self, gamma, delta, mu, nu):
        """``<<R_gamma| D_mu kron D_nu^* |P_delta>>``, row ``(gamma, delta)``, column ``(mu, nu)``."""
        dm, dn = self.basis.ops[mu], self.basis.ops[nu]
        r, p = self.frame.duals[gamma], self.frame.ops[delta]
        return np.vdot(r, dm @ p @ dn.conj().T)


def beta_op(basis, frame):
    frame = _as_frame(frame)
    if basis.d != frame.d:
        raise ArgumentError(f"basis (d={basis.d}) and frame (d={frame.d}) dimensions differ")
    return BetaOp(basis, frame)


def solve_chi(lam, beta, method="closed-form", max_condition=1e8):
    """Recover ``chi`` from ``lambda``.

    ``method="closed-form"`` uses the factored inverse; ``"numeric"`` solves
    the dense ``d^4`` system with LU.  Both give the same (unique) answer.

    Raises:
        SolveError: the frame's ``P`` is too ill-conditioned for a meaningful answer.
    """
    lam = np.asarray(lam)
    d = beta.d
    if lam.shape != (d * d, d * d):
        raise ArgumentError(f"lambda must be {d * d}x{d * d}, got {lam.shape}")
    cond = beta.frame.condition
    if cond > max_condition:
        raise SolveError(f"frame condition number {cond:.3g} exceeds {max_condition:.0e}", condition_number=cond)
    if method == "closed-form":
        return beta.solve(lam)
    if method == "numeric":
        x = np.linalg.solve(beta.matrix, lam.reshape(-1))
        return x.reshape(d * d, d * d)
    raise ArgumentError(f"unknown method {method!r}")


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """Real ``d^2 x d^2`` matrix of measured coefficients ``omega_{mu,nu}``.

    ``provenance`` is ``{"kind": "exact"}`` or
    ``{"kind": "sampled", "mode": ..., "shots": N, "seed": s}``.
    """

    omega: np.ndarray
    provenance: dict = field(default_factory=lambda: {"kind": "exact"})

    @property
    def d(self):
        return int(round(np.sqrt(self.omega.shape[0])))


def omega_exact(k, prep, meas):
    """Noise-free data ``omega_{mu,nu} = Tr[Pbar_mu^dag eps(P_nu)]``."""
    pe = _elements(prep)
    me = _elements(meas)
    if pe.shape[1] != k.d or me.shape[1] != k.d:
        raise ArgumentError("POVM and channel dimensions differ")
    outs = np.array([channels.apply(k, p) for p in pe])
    w = np.einsum("mij,nij->mn", me.conj(), outs)
    if np.abs(w.imag).max() > 1e-10 * max(1.0, np.abs(w).max()):
        return DataMatrix(w)
    return DataMatrix(np.ascontiguousarray(w.real))


def _elements(obj):
    if isinstance(obj, (Povm, SicPovm, OperatorFrame)):
        return np.asarray(obj.elements if not isinstance(obj, OperatorFrame) else obj.ops)
    return np.asarray(obj)


def _omega(data):
    return data.omega if isinstance(data, DataMatrix) else np.asarray(data)


def reconstruct_lambda_c(data, prep, meas):
    """``lambda_c = (Pbar^-1)^dag omega P^-1 = sum omega_{mu,nu} |Rbar_mu>><<R_nu|``."""
    omega = _omega(data)
    prep, meas = _as_frame(prep), _as_frame(meas)
    n = prep.d**2
    if omega.shape != (n, n) or meas.d != prep.d:
        raise ArgumentError(f"omega of shape {omega.shape} does not fit frames on d={prep.d}")
    return meas.superR @ omega @ prep.inverse


def reconstruct_chi_c(data, prep, meas):
    """``chi_c = sum omega_{mu,nu} Rbar_mu kron conj(R_nu)``."""
    omega = _omega(data)
    prep, meas = _as_frame(prep), _as_frame(meas)
    d = prep.d
    if omega.shape != (d * d, d * d) or meas.d != d:
        raise ArgumentError(f"omega of shape {omega.shape} does not fit frames on d={d}")
    t = np.einsum("mn,mij,nkl->ikjl", omega, meas.duals, prep.duals.conj())
    return t.reshape(d * d, d * d)


def reconstruct_chi_sic(data, s, unital=False, tol=1e-8):
    """Closed-form reconstruction when inputs and measurement are the SIC ``s``.

    The general formula
    ``chi_c = -I + sum omega [(d+1)^2 Phi_mu kron Phi_nu^* - (d+1) Phi_mu kron I]``
    is always evaluated.  With ``unital=True`` the shortcut
    ``-(d+2) I + (d+1)^2 sum omega Phi_mu kron Phi_nu^*`` is returned instead,
    after checking it agrees with the general formula to ``tol``.

    Raises:
        ConsistencyError: ``unital=True`` but the two formulas disagree.
    """
    omega = _omega(data)
    d = s.d
    if omega.shape != (d * d, d * d):
        raise ArgumentError(f"omega must be {d * d}x{d * d}, got {omega.shape}")
    phi = s.projectors
    eye = np.eye(d * d)
    pair = np.einsum("mn,mij,nkl->ikjl", omega, phi, phi.conj()).reshape(d * d, d * d)
    left = np.kron(np.einsum("m,mij->ij", omega.sum(axis=1), phi), np.eye(d))
    general = -eye + (d + 1) ** 2 * pair - (d + 1) * left
    if not unital:
        return general
    short = -(d + 2) * eye + (d + 1) ** 2 * pair
    gap = np.abs(short - general).max()
    if gap > tol:
        raise ConsistencyError(f"unital reconstruction disagrees with the general one by {gap:.3g}", discrepancy=gap)
    return short


@dataclass(frozen=True, eq=False)
class ProductFrame:
    """Product POVM ``Pi_x = Pbar_mu kron P_nu^*`` on the doubled space and its duals.

    ``x = d^2 mu + nu`` with ``mu`` the measurement index and ``nu`` the input index.
    """

    pis: np.ndarray
    qs: np.ndarray

    @property
    def d(self):
        return int(round(np.sqrt(self.pis.shape[1])))

    def probabilities(self, rho):
        """``p(x) = Tr[Pi_x^dag rho]``."""
        return np.einsum("xij,ij->x", self.pis.conj(), rho).real

    def q_norms(self):
        """``(Q_x|Q_x)`` for every ``x``."""
        return np.einsum("xij,xij->x", self.qs.conj(), self.qs).real

    def gram(self):
        q = self.qs.reshape(self.qs.shape[0], -1)
        return q.conj() @ q.T

    def estimate(self, p):
        """Linear estimator ``sum_x p(x) Q_x``."""
        return np.einsum("x,xij->ij", p, self.qs)


def _kron_stack(a, b):
    n, d = a.shape[0], a.shape[1]
    t = np.einsum("mij,nkl->mnikjl", a, b)
    return t.reshape(n * b.shape[0], d * d, d * d)


def product_frame(prep, meas):
    """Build :class:`ProductFrame` from input and measurement POVMs (or frames)."""
    pf, mf = _as_frame(prep), _as_frame(meas)
    if pf.d != mf.d:
        raise ArgumentError("input and measurement POVMs have different dimensions")
    pis = _kron_stack(mf.ops, pf.ops.conj())
    qs = _kron_stack(mf.duals, pf.duals.conj())
    return ProductFrame(pis, qs)


def delta_p(pf, rho):
    """``Delta_p(Q) = sum_x p(x) (Q_x|Q_x)`` with ``p(x) = (Pi_x|rho)``."""
    return float(pf.probabilities(rho) @ pf.q_norms())


def delta_avg(pf):
    """Haar average of :func:`delta_p`: ``(1/D) sum_x Tr[Pi_x] (Q_x|Q_x)`` with ``D = d^2``."""
    tr = np.einsum("xii->x", pf.pis).real
    return float(tr @ pf.q_norms() / pf.pis.shape[1])


def mse_prediction(pf, rho, shots):
    """Expected squared Hilbert-Schmidt error ``(Delta_p - Tr[rho^2]) / N``."""
    purity = float(np.vdot(rho, rho).real)
    return (delta_p(pf, rho) - purity) / shots


def delta_constants(d):
    """Reference constants for product-SIC tomography versus joint 2-designs.

    Returns:
        dict: ``avg_opt = (d(d+1) - 1)^2``, ``joint_opt = d^4 - d^2 + 1/d^2`` and
        ``ratio_bound = (d - 1)/(d + 1)``.
    """
    if d < 2:
        raise ArgumentError(f"d must be at least 2, got {d}")
    avg = float((d * (d + 1) - 1) ** 2)
    joint = d**4 - d**2 + 1 / d**2
    bound = (d - 1) / (d + 1)
    assert joint / avg > bound
    return {"avg_opt": avg, "joint_opt": joint, "ratio_bound": bound}


def chi_diagnostics(chi):
    """Hermiticity defect, trace and smallest eigenvalue of an estimated ``chi_c``."""
    herm = (chi + chi.conj().T) / 2
    return {
        "hermiticity": float(np.abs(chi - chi.conj().T).max()),
        "trace": complex(np.trace(chi)),
        "min_eig": float(np.linalg.eigvalsh(herm).min()),
    }


def werner_chi(d, q):
    """``d [(1 - q)|S+>><<S+| + (q/d^2) I]``, the ``chi_c`` of the depolarizing channel."""
    s = vec(np.eye(d)) / np.sqrt(d)
    return d * ((1 - q) * np.outer(s, s) + q / d**2 * np.eye(d * d))

