"""SIC-POVMs: construction, numerical fiducial search and closed-form frame theory.

The POVM elements are ``P_mu = Phi_mu / d`` with unit vectors satisfying
``|<Phi_mu|Phi_nu>|^2 = (1 + d delta_mu,nu) / (d + 1)``.  Fiducials are
searched for on the Weyl-Heisenberg orbit by minimizing the frame potential
``sum_{mu,nu} |<Phi_mu|Phi_nu>|^4``, whose global minimum ``2 d^3 / (d + 1)``
is attained exactly by SIC sets.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .channels import weyl_operators
from .errors import ArgumentError, FrameError, SearchError
from .frames import Povm, build_povm, super_matrix
from .vecrep import vec

#: acceptance window for a searched fiducial (potential gap and overlap error)
SEARCH_TOL = 1e-6


def wh_displacements(d):
    """The ``d^2`` Weyl-Heisenberg displacements ``X^a Z^b``, index ``d*a + b``."""
    if d < 2:
        raise ArgumentError(f"d must be at least 2, got {d}")
    return np.array(weyl_operators(d))


def min_frame_potential(d):
    return 2 * d**3 / (d + 1)


def sic_overlap_targets(d):
    """Matrix of ideal ``|<Phi_mu|Phi_nu>|^2`` values."""
    n = d * d
    return (1 + d * np.eye(n)) / (d + 1)


def overlaps(vectors):
    v = np.asarray(vectors)
    return np.abs(v.conj() @ v.T) ** 2


def frame_potential(vectors, tol=1e-8):
    """``sum_{mu,nu} |<Phi_mu|Phi_nu>|^4`` for unit vectors (one per row)."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2:
        raise ArgumentError(f"expected an (n, d) array of vectors, got shape {v.shape}")
    if np.abs(np.linalg.norm(v, axis=1) - 1).max() > tol:
        raise ArgumentError("frame potential is defined for unit vectors only")
    return float(np.sum(overlaps(v) ** 2))


@dataclass(frozen=True, eq=False)
class SicPovm:
    d: int
    fiducial: np.ndarray
    vectors: np.ndarray
    precision: float

    @property
    def projectors(self):
        return np.einsum("mi,mj->mij", self.vectors, self.vectors.conj())

    @property
    def elements(self):
        return self.projectors / self.d

    def povm(self, tol=1e-8):
        return build_povm(self.vectors, np.full(self.d**2, 1 / self.d), tol=max(tol, 10 * self.precision))

    def conj(self):
        return SicPovm(self.d, self.fiducial.conj(), self.vectors.conj(), self.precision)


@dataclass(frozen=True)
class SearchReport:
    d: int
    iterations: int
    potential: float
    target: float
    achieved: bool
    seed: int
    restart: int
    restarts_tried: int
    precision: float

    def to_dict(self):
        return dict(self.__dict__)


def sic_from_fiducial(fiducial, d=None):
    """Weyl-Heisenberg orbit ``X^a Z^b |fiducial>`` packaged as a :class:`SicPovm`.

    ``precision`` records the largest deviation of the overlaps from their
    ideal values; no threshold is applied here.
    """
    f = np.asarray(fiducial, dtype=complex)
    f = f / np.linalg.norm(f)
    d = f.size if d is None else d
    vecs = wh_displacements(d) @ f
    prec = float(np.abs(overlaps(vecs) - sic_overlap_targets(d)).max())
    f.setflags(write=False)
    vecs.setflags(write=False)
    return SicPovm(d, f, vecs, prec)


def sic_d2():
    """Tetrahedral qubit SIC: ``|0>`` and ``|0>/sqrt3 + sqrt(2/3) e^{2 pi i k/3} |1>``."""
    vecs = [np.array([1, 0], dtype=complex)]
    for k in range(3):
        vecs.append(np.array([1 / np.sqrt(3), np.sqrt(2 / 3) * np.exp(2j * np.pi * k / 3)]))
    vecs = np.array(vecs)
    prec = float(np.abs(overlaps(vecs) - sic_overlap_targets(2)).max())
    vecs.setflags(write=False)
    return SicPovm(2, vecs[0], vecs, prec)


def _fiducial_objective(phi, disp):
    """``sum_ab |<phi|D_ab|phi>|^4`` and its gradient with respect to ``conj(phi)``."""
    dphi = disp @ phi
    c = dphi @ phi.conj()
    a = np.abs(c) ** 2
    ddag_phi = np.einsum("kji,j->ki", disp.conj(), phi)
    grad = 2 * ((a * c.conj()) @ dphi + (a * c) @ ddag_phi)
    return float(np.sum(a**2)), grad


def _descend(d, disp, rng, max_iters, target):
    phi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    phi /= np.linalg.norm(phi)
    f, g = _fiducial_objective(phi, disp)
    step = 0.1
    it = 0
    while it < max_iters:
        it += 1
        g = g - phi * np.vdot(phi, g)
        gn = np.linalg.norm(g)
        if gn < 1e-13 or f - target < 1e-15:
            break
        while True:
            trial = phi - step * g
            trial /= np.linalg.norm(trial)
            ft, gt = _fiducial_objective(trial, disp)
            if ft < f:
                break
            step /= 2
            if step < 1e-16:
                return phi, f, it
        phi, f, g = trial, ft, gt
        step *= 1.5
    return phi, f, it


def _polish(phi, disp, max_nfev):
    """Levenberg-Marquardt on the overlap residuals ``|<phi|D|phi>|^2 - 1/(d+1)``.

    Gradient descent alone stalls sublinearly at d = 3, where the minimum is
    degenerate; solving the residual equations directly converges quickly.
    """
    d = phi.size
    ops = disp[1:]
    target = 1 / (d + 1)

    def residuals(x):
        z = x[:d] + 1j * x[d:]
        n = np.vdot(z, z).real
        u = (ops @ z) @ z.conj()
        return np.append(np.abs(u) ** 2 / n**2 - target, n - 1)

    def jacobian(x):
        a, b = x[:d], x[d:]
        z = a + 1j * b
        n = np.vdot(z, z).real
        dz = ops @ z
        ddz = np.einsum("kji,j->ki", ops.conj(), z).conj()
        u = dz @ z.conj()
        du_da = dz + ddz
        du_db = -1j * dz + 1j * ddz
        abs2 = np.abs(u) ** 2
        ja = 2 * (u.conj()[:, None] * du_da).real / n**2 - 4 * abs2[:, None] * a / n**3
        jb = 2 * (u.conj()[:, None] * du_db).real / n**2 - 4 * abs2[:, None] * b / n**3
        jac = np.hstack([ja, jb])
        return np.vstack([jac, np.concatenate([2 * a, 2 * b])])

    x0 = np.concatenate([phi.real, phi.imag])
    if max_nfev <= len(x0):
        return phi
    sol = least_squares(residuals, x0, jac=jacobian, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    z = sol.x[:d] + 1j * sol.x[d:]
    return z / np.linalg.norm(z)


def sic_search(d, seed=0, max_iters=5000, restarts=20, workers=1):
    """Numerically find a Weyl-Heisenberg covariant SIC fiducial.

    Each restart runs projected gradient descent on the unit sphere from a
    random start drawn from its own stream ``(seed, restart)``, then refines
    the point by a least-squares solve of the overlap equations.  ``max_iters``
    bounds the iterations of each stage.  The result is
    the lowest-index restart whose frame potential is within ``SEARCH_TOL`` of
    ``2 d^3/(d + 1)`` and whose overlaps match to ``SEARCH_TOL``, so the outcome
    does not depend on ``workers``.

    Returns:
        tuple: ``(SicPovm, SearchReport)``.

    Raises:
        SearchError: no restart converged; carries the best report found.
    """
    if not 2 <= d <= 8:
        raise ArgumentError(f"SIC search supports 2 <= d <= 8, got {d}")
    if max_iters < 1 or restarts < 1:
        raise ArgumentError("max_iters and restarts must be positive")
    disp = wh_displacements(d)
    target = min_frame_potential(d)
    fid_target = target / d**2

    def run(r):
        rng = np.random.default_rng([seed, r])
        phi, f, it = _descend(d, disp, rng, max_iters, fid_target)
        phi = _polish(phi, disp, max_iters)
        sic = sic_from_fiducial(phi, d)
        pot = frame_potential(sic.vectors)
        ok = pot - target < SEARCH_TOL and sic.precision < SEARCH_TOL
        return sic, SearchReport(d, it, pot, target, ok, seed, r, r + 1, sic.precision)

    best = None
    if workers > 1:
        pool = ThreadPoolExecutor(max_workers=workers)
        futures = [pool.submit(run, r) for r in range(restarts)]
        results = (fut.result() for fut in futures)
    else:
        pool = None
        results = (run(r) for r in range(restarts))
    try:
        for sic, rep in results:
            if rep.achieved:
                return sic, rep
            if best is None or rep.potential < best[1].potential:
                best = (sic, rep)
    finally:
        if pool is not None:
            pool.shutdown(wait=False, cancel_futures=True)
    sic, rep = best
    rep = SearchReport(**{**rep.to_dict(), "restarts_tried": restarts})
    raise SearchError(
        f"no SIC fiducial found for d={d} after {restarts} restarts "
        f"(best potential {rep.potential:.12g}, target {target:.12g})",
        report=rep,
        best=sic,
    )


def get_sic(d, seed=0, **kwargs):
    """Analytic SIC for ``d = 2``, searched SIC otherwise."""
    if d == 2:
        return sic_d2()
    return sic_search(d, seed=seed, **kwargs)[0]


def sic_duals(s):
    """Reciprocal operators ``R_mu = (d + 1) Phi_mu - I`` of ``P_mu = Phi_mu / d``."""
    return (s.d + 1) * s.projectors - np.eye(s.d)


def frame_op_closed_form(d):
    """``F = (I + |I>><<I|)/(d(d+1))`` and ``F^-1 = d(d+1) I - d |I>><<I|``."""
    i_vec = vec(np.eye(d))
    ii = np.outer(i_vec, i_vec)
    eye = np.eye(d * d)
    return (eye + ii) / (d * (d + 1)), d * (d + 1) * eye - d * ii


def two_design_sum(s, conjugate=True):
    """``sum_mu P_mu kron P_mu^*`` (or without the conjugate)."""
    el = s.elements
    other = el.conj() if conjugate else el
    return sum(np.kron(a, b) for a, b in zip(el, other))


def two_design_closed_form(d, conjugate=True):
    """Right-hand side of the 2-design identity.

    Without conjugation it is ``(I + SWAP)/(d(d+1))``; the partial transpose
    turns ``SWAP`` into ``|I>><<I|``.
    """
    i_vec = vec(np.eye(d))
    if conjugate:
        second = np.outer(i_vec, i_vec)
    else:
        second = np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)
    return (np.eye(d * d) + second) / (d * (d + 1))


def k_operator(povm):
    """``K = sum_mu |P_mu>><<P_mu| / Tr[P_mu]``."""
    el = povm.elements if isinstance(povm, (Povm, SicPovm)) else np.asarray(povm)
    w = np.einsum("mii->m", el).real
    p = super_matrix(el)
    return (p / w) @ p.conj().T


def k_inverse_trace(povm, max_condition=1e10):
    """``Tr[K^-1]``; equals ``d(d(d+1) - 1)`` exactly for a SIC and exceeds it otherwise.

    Raises:
        FrameError: ``K`` is singular (the POVM is not informationally complete).
    """
    k = k_operator(povm)
    s = np.linalg.svd(k, compute_uv=False)
    cond = np.inf if s[-1] == 0 else s[0] / s[-1]
    if not cond < max_condition:
        raise FrameError(f"K is singular (condition number {cond:.3g})", condition_number=cond)
    return float(np.trace(np.linalg.inv(k)).real)


def k_inverse_trace_bound(d):
    return d * (d * (d + 1) - 1)


def perturbed_povm(s, eps=1e-2, seed=0):
    """Rank-one IC-POVM obtained by jiggling a SIC's vectors and re-completing.

    The result is a valid POVM that is no longer tight, so its ``Tr[K^-1]``
    lies strictly above the SIC value.
    """
    from .frames import regularize_povm

    rng = np.random.default_rng(seed)
    v = np.asarray(s.vectors) + eps * (rng.standard_normal(s.vectors.shape) + 1j * rng.standard_normal(s.vectors.shape))
    v /= np.linalg.norm(v, axis=1)[:, None]
    return regularize_povm(v, np.full(len(v), 1 / s.d))
