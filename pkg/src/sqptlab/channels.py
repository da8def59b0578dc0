"""Kraus, Choi (``chi^c``) and transfer-matrix (``lambda^c``) representations.

All superoperators use the row-stacking convention of :mod:`sqptlab.vecrep`:

* ``chi_c = sum_m |E_m>><<E_m|``, Hermitian PSD with trace ``d``;
* ``lambda_c = sum_m E_m kron conj(E_m)``, so ``|eps(rho)>> = lambda_c |rho>>``;
* the two are exchanged by :func:`sqptlab.vecrep.reshuffle`.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, RepresentationError
from .vecrep import TOL, is_unitary, reshuffle, unvec, vec

KINDS = {
    "kraus-list": "explicit Kraus operators; params: ops (list of d x d matrices as [re, im] pairs)",
    "depolarizing": "rho -> (1-q) rho + q Tr[rho] I/d; params: d >= 2, 0 <= q <= 1",
    "unitary": "rho -> U rho U^dag; params: U (d x d unitary as [re, im] pairs)",
    "amplitude-damping": "qubit decay |1> -> |0>; params: d = 2, 0 <= gamma <= 1",
    "random": "Haar-random Stinespring isometry; params: d >= 2, rank >= 1, seed",
}


class KrausSet:
    """Trace-preserving channel given by Kraus operators.

    Args:
        ops: sequence of ``d x d`` matrices (or a ``(m, d, d)`` array).
        tol: tolerance on ``sum_m E_m^dag E_m = I``.
    """

    def __init__(self, ops, tol=1e-10):
        ops = np.array(ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2] or ops.shape[0] == 0:
            raise ArgumentError(f"Kraus operators must have shape (m, d, d), got {ops.shape}")
        completeness = np.einsum("mki,mkj->ij", ops.conj(), ops)
        dev = np.abs(completeness - np.eye(ops.shape[1])).max()
        if dev > tol:
            raise ArgumentError(f"Kraus set is not trace preserving (deviation {dev:.3g})")
        ops.setflags(write=False)
        self.ops = ops

    @property
    def d(self):
        return self.ops.shape[1]

    def __len__(self):
        return self.ops.shape[0]

    def __iter__(self):
        return iter(self.ops)

    def __repr__(self):
        return f"KrausSet(d={self.d}, m={len(self)})"


def _check_dim(k, rho):
    rho = np.asarray(rho)
    if rho.shape != (k.d, k.d):
        raise ArgumentError(f"operator of shape {rho.shape} does not match channel dimension {k.d}")
    return rho


def apply(k, rho):
    """``eps(rho) = sum_m E_m rho E_m^dag``."""
    rho = _check_dim(k, rho)
    return np.einsum("mij,jk,mlk->il", k.ops, rho, k.ops.conj())


def chi_c(k):
    """Choi-type matrix ``sum_m |E_m>><<E_m|`` (``d^2 x d^2``)."""
    v = k.ops.reshape(len(k), -1)
    return v.T @ v.conj()


def lambda_c(k):
    """Transfer matrix ``sum_m E_m kron conj(E_m)``."""
    d = k.d
    return np.einsum("mij,mkl->ikjl", k.ops, k.ops.conj()).reshape(d * d, d * d)


def choi(k):
    """Normalized Choi state ``chi_c / d``."""
    return chi_c(k) / k.d


def chi_from_lambda(lam):
    return reshuffle(lam)


def lambda_from_chi(chi):
    return reshuffle(chi)


def jamiolkowski_apply(chi, rho):
    """Act with a channel given only by ``chi_c``.

    ``eps(rho) = sum_{ijkl} chi_{ij;kl} |i><j| rho |l><k|``.
    """
    chi = np.asarray(chi)
    d = int(round(np.sqrt(chi.shape[0])))
    c = chi.reshape(d, d, d, d)
    return np.einsum("ijkl,jl->ik", c, np.asarray(rho))


def kraus_from_chi(chi, tol=TOL, cutoff=1e-12):
    """Spectral factorization of ``chi_c`` into Kraus operators.

    Eigenvalues are sorted in descending order and each eigenvector's phase is
    fixed so that its first non-negligible component is real positive.
    Eigenvalues below ``cutoff`` are dropped.

    Raises:
        RepresentationError: ``chi`` is not Hermitian PSD within ``tol``.
    """
    chi = np.asarray(chi, dtype=complex)
    if chi.ndim != 2 or chi.shape[0] != chi.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {chi.shape}")
    if not np.allclose(chi, chi.conj().T, rtol=0, atol=tol):
        raise RepresentationError("chi is not Hermitian")
    w, v = np.linalg.eigh((chi + chi.conj().T) / 2)
    if w.min() < -tol:
        raise RepresentationError(f"chi is not positive semidefinite (min eigenvalue {w.min():.3g})")
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    keep = w > cutoff
    ops = []
    for s, col in zip(w[keep], v[:, keep].T):
        lead = np.flatnonzero(np.abs(col) > 1e-8 * np.abs(col).max())[0]
        col = col * (abs(col[lead]) / col[lead])
        ops.append(np.sqrt(s) * unvec(col))
    return KrausSet(ops, tol=max(1e-8, 10 * tol))


def weyl_operators(d):
    """Clock-and-shift operators ``X^a Z^b`` ordered by ``d*a + b``."""
    omega = np.exp(2j * np.pi / d)
    x = np.roll(np.eye(d), 1, axis=0)
    z = np.diag(omega ** np.arange(d))
    return [np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b) for a in range(d) for b in range(d)]


def depolarizing(d, q):
    """``rho -> (1 - q) rho + q Tr[rho] I/d`` as a Weyl mixture.

    For ``d = 2`` the Weyl operators are the Pauli matrices up to phases.
    """
    if d < 2:
        raise ArgumentError(f"depolarizing channel needs d >= 2, got {d}")
    if not 0 <= q <= 1:
        raise ArgumentError(f"q must lie in [0, 1], got {q}")
    ws = weyl_operators(d)
    p0 = 1 - q + q / d**2
    ops = [np.sqrt(p0) * ws[0]] + [np.sqrt(q) / d * w for w in ws[1:]]
    return KrausSet(ops)


def amplitude_damping(gamma):
    if not 0 <= gamma <= 1:
        raise ArgumentError(f"gamma must lie in [0, 1], got {gamma}")
    e0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    e1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return KrausSet([e0, e1])


def unitary_channel(u, tol=TOL):
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ArgumentError("matrix is not unitary")
    return KrausSet([u])


def random_channel(d, rank, seed):
    """Random channel of Kraus rank ``rank`` from a Haar-random isometry.

    A ``(rank*d) x d`` complex Gaussian matrix is orthonormalized by QR (with
    the diagonal phase fix), and its ``d x d`` row blocks are the Kraus
    operators.
    """
    if d < 1 or rank < 1:
        raise ArgumentError(f"need d >= 1 and rank >= 1, got d={d}, rank={rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((rank * d, d)) + 1j * rng.standard_normal((rank * d, d))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausSet(q.reshape(rank, d, d))


def identity_channel(d):
    return KrausSet([np.eye(d)])


def matrix_to_pairs(m):
    """Nested ``[re, im]`` encoding used in every JSON file."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 0:
        return [float(m.real), float(m.imag)]
    return [matrix_to_pairs(x) for x in m]


def pairs_to_matrix(data):
    a = np.asarray(data, dtype=float)
    if a.shape[-1:] != (2,):
        raise ArgumentError("expected nested [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


@dataclass(frozen=True)
class ChannelSpec:
    """Declarative channel description with a JSON encoding.

    Examples of the encoding::

        {"kind": "depolarizing", "d": 2, "q": 0.3}
        {"kind": "amplitude-damping", "d": 2, "gamma": 0.4}
        {"kind": "random", "d": 3, "rank": 2, "seed": 7}
    """

    kind: str
    d: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown channel kind {self.kind!r}; expected one of {sorted(KINDS)}")
        if not isinstance(self.d, int) or self.d < 1:
            raise ArgumentError(f"d must be a positive integer, got {self.d!r}")

    def to_dict(self):
        return {"kind": self.kind, "d": self.d, **self.params}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        try:
            kind = data.pop("kind")
        except KeyError:
            raise ArgumentError("channel spec is missing 'kind'") from None
        d = data.pop("d", None)
        if d is None:
            if kind == "amplitude-damping":
                d = 2
            elif kind in ("unitary", "kraus-list"):
                key = "U" if kind == "unitary" else "ops"
                if key not in data:
                    raise ArgumentError(f"channel spec is missing {key!r}")
                d = len(data[key]) if kind == "unitary" else len(data[key][0])
            else:
                raise ArgumentError("channel spec is missing 'd'")
        return cls(kind, int(d), data)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ArgumentError(f"invalid channel JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ArgumentError("channel JSON must be an object")
        return cls.from_dict(data)


def make_channel(spec):
    """Build the :class:`KrausSet` described by a :class:`ChannelSpec` (or dict)."""
    if isinstance(spec, dict):
        spec = ChannelSpec.from_dict(spec)
    p = spec.params

    def need(name):
        if name not in p:
            raise ArgumentError(f"{spec.kind} channel requires parameter {name!r}")
        return p[name]

    if spec.kind == "depolarizing":
        return depolarizing(spec.d, float(need("q")))
    if spec.kind == "amplitude-damping":
        if spec.d != 2:
            raise ArgumentError("amplitude damping is defined for d = 2 only")
        return amplitude_damping(float(need("gamma")))
    if spec.kind == "unitary":
        u = pairs_to_matrix(need("U"))
        if u.shape != (spec.d, spec.d):
            raise ArgumentError(f"U has shape {u.shape}, expected ({spec.d}, {spec.d})")
        return unitary_channel(u, tol=1e-8)
    if spec.kind == "random":
        return random_channel(spec.d, int(need("rank")), int(need("seed")))
    ops = pairs_to_matrix(need("ops"))
    if ops.shape[1:] != (spec.d, spec.d):
        raise ArgumentError(f"Kraus operators have shape {ops.shape[1:]}, expected ({spec.d}, {spec.d})")
    return KrausSet(ops, tol=1e-8)
