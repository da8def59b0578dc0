"""Self-check suite tying every representation and identity together.

Each check returns the largest residual it saw; a check passes when that
residual is below its threshold.  Used by ``sqptlab verify``.
"""

from dataclasses import dataclass

import numpy as np

from . import channels, frames, sic, sqpt, vecrep


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self):
        return bool(self.residual < self.threshold)


def _rand_op(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def _rand_state(rng, d):
    a = _rand_op(rng, d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def run_checks(d=2, seed=0, break_frame=False, n_random=10):
    """Run the suite for dimension ``d`` and return a list of :class:`Check`.

    With ``break_frame`` one SIC element is duplicated before building the
    frame, which makes the suite raise :class:`~sqptlab.errors.FrameError`.
    """
    rng = np.random.default_rng(seed)
    out = []

    def add(name, residual, threshold=1e-10):
        out.append(Check(name, float(residual), threshold))

    s = sic.get_sic(d, seed=seed)
    elements = np.array(s.elements)
    if break_frame:
        elements[1] = elements[0]
    frame = frames.build_frame(elements)
    basis = frames.standard_basis(d, "gell-mann")

    pairs = {vecrep.index_mu(i, j, d) for i in range(d) for j in range(d)}
    add("index map is a bijection", 0.0 if pairs == set(range(d * d)) else 1.0, 0.5)

    iso = sandwich = 0.0
    for _ in range(n_random):
        a, b, rho = _rand_op(rng, d), _rand_op(rng, d), _rand_op(rng, d)
        iso = max(iso, abs(vecrep.hs_inner(a, b) - np.trace(a.conj().T @ b)))
        sandwich = max(sandwich, np.abs(np.kron(a, b.T) @ vecrep.vec(rho) - vecrep.vec(a @ rho @ b)).max())
    add("<<A|B>> = Tr[A^dag B]", iso)
    add("|A rho B>> = A kron B^T |rho>>", sandwich)

    bsw = vecrep.beta_swap(d)
    a, b = _rand_op(rng, d), _rand_op(rng, d)
    lhs = bsw @ vecrep.vec2(np.outer(vecrep.vec(a), vecrep.vec(b).conj()))
    add("reshuffle is an involution", np.abs(bsw @ bsw - np.eye(d**4)).max())
    add("reshuffle |A>><<B| = A kron B^*", np.abs(lhs - vecrep.vec2(np.kron(a, b.conj()))).max())

    act = conv = kr = tr = psd = 0.0
    for i in range(n_random):
        k = channels.random_channel(d, 1 + i % (d * d), int(rng.integers(2**32)))
        rho = _rand_state(rng, d)
        act = max(act, np.abs(channels.lambda_c(k) @ vecrep.vec(rho) - vecrep.vec(channels.apply(k, rho))).max())
        cc = channels.chi_c(k)
        conv = max(conv, np.abs(channels.chi_from_lambda(channels.lambda_c(k)) - cc).max())
        k2 = channels.kraus_from_chi(cc)
        kr = max(kr, np.abs(channels.chi_c(k2) - cc).max())
        tr = max(tr, abs(np.trace(cc) - d))
        psd = max(psd, -np.linalg.eigvalsh(cc).min())
    add("transfer matrix reproduces the channel action", act)
    add("chi_c = reshuffle(lambda_c)", conv)
    add("Kraus extraction round trip", kr)
    add("Tr[chi_c] = d", tr)
    add("chi_c is positive semidefinite", max(psd, 0.0))

    add("reciprocal operators are biorthogonal", frames.check_biorthogonal(frame))
    add("sum |R_mu>><<P_mu| = I", frames.check_resolution(frame))
    add("dual via frame operator agrees", np.abs(frames.duals_via_frame_op(elements) - frame.duals).max(), 1e-8)

    add("SIC overlaps", s.precision, 1e-8)
    f_cf, f_inv = sic.frame_op_closed_form(d)
    add("SIC frame operator closed form", np.abs(frames.frame_operator(s.elements) - f_cf).max())
    add("SIC frame operator inverse", np.abs(f_cf @ f_inv - np.eye(d * d)).max())
    add("SIC dual closed form", np.abs(sic.sic_duals(s) - frame.duals).max(), 1e-8)
    add("SIC attains the Tr[K^-1] bound", abs(sic.k_inverse_trace(s) - sic.k_inverse_trace_bound(d)), 1e-8)
    add("SIC 2-design identity", np.abs(sic.two_design_sum(s) - sic.two_design_closed_form(d)).max())

    k = channels.random_channel(d, d, int(rng.integers(2**32)))
    rho = _rand_state(rng, d)
    chi = sqpt.chi_matrix(k, basis)
    lam = sqpt.lambda_matrix(k, frame)
    add("chi resynthesizes the channel", np.abs(sqpt.resynthesize(chi, basis, rho) - channels.apply(k, rho)).max())
    outs = np.array([channels.apply(k, p) for p in frame.ops])
    add("lambda expands eps(P_nu) over the inputs", np.abs(np.einsum("mn,mij->nij", lam, frame.ops) - outs).max())

    beta = sqpt.beta_op(basis, frame)
    bm = beta.matrix
    n = d * d
    entries = np.array(
        [[beta.entry(g, dl, m, nu) for m in range(n) for nu in range(n)] for g in range(n) for dl in range(n)]
    )
    add("beta entries match the Kronecker form", np.abs(entries - bm).max())
    add("sum beta chi = lambda", np.abs(entries @ chi.reshape(-1) - lam.reshape(-1)).max(), 1e-9)
    add("closed-form beta^-1", np.abs(beta.inverse_matrix() - np.linalg.inv(bm)).max(), 1e-8)
    add("|det beta| = 1", abs(abs(np.linalg.det(bm)) - 1), 1e-6)
    sol = sqpt.solve_chi(lam, beta)
    add("closed-form solve recovers chi", np.abs(sol - chi).max(), 1e-8)
    add("dense solve recovers chi", np.abs(sqpt.solve_chi(lam, beta, "numeric") - chi).max(), 1e-8)

    pf = sqpt.product_frame(s, s)
    add("product POVM is complete", np.abs(pf.pis.sum(axis=0) - np.eye(n)).max())
    add("product duals are biorthogonal", np.abs(pf.qs.reshape(n * n, -1).conj() @ pf.pis.reshape(n * n, -1).T - np.eye(n * n)).max(), 1e-8)

    omega = sqpt.omega_exact(k, s, s)
    add("sum omega = d", abs(omega.omega.sum() - d))
    add("exact lambda_c reconstruction", np.abs(sqpt.reconstruct_lambda_c(omega, s, s) - channels.lambda_c(k)).max())
    add("exact chi_c reconstruction", np.abs(sqpt.reconstruct_chi_c(omega, s, s) - channels.chi_c(k)).max())
    add("SIC chi_c formula", np.abs(sqpt.reconstruct_chi_sic(omega, s) - channels.chi_c(k)).max(), 1e-8)

    werner = 0.0
    for q in (0.0, 0.3, 1.0):
        om = sqpt.omega_exact(channels.depolarizing(d, q), s, s)
        for unital in (False, True):
            werner = max(werner, np.abs(sqpt.reconstruct_chi_sic(om, s, unital=unital) - sqpt.werner_chi(d, q)).max())
    add("depolarizing channel gives a Werner state", werner, 1e-8)

    consts = sqpt.delta_constants(d)
    add("Delta_avg of product SIC", abs(sqpt.delta_avg(pf) - consts["avg_opt"]), 1e-8)
    return out
