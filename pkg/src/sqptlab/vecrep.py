"""Row-stacking vectorization of operators and superoperators.

An operator ``A`` on a ``d``-dimensional space maps to the vector
``|A>> = sum_ij A_ij |i>|j>``, i.e. the row-major flattening of ``A``.  With
this convention ``|A rho B>> = (A kron B^T) |rho>>`` and
``<<A|B>> = Tr[A^dag B]``.  The same rule applied one level up sends a
``d^2 x d^2`` matrix to a vector of length ``d^4``.

The composite index of the pair ``(i, j)`` is ``mu = d*i + j`` (0-based).
"""

import numpy as np

from .errors import ArgumentError

#: default tolerance for structural predicates
TOL = 1e-10


def _as_square(a, name="matrix"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError(f"{name} must be square, got shape {a.shape}")
    return a


def _isqrt(n, what):
    r = int(round(np.sqrt(n)))
    if r * r != n or r < 1:
        raise ArgumentError(f"{what} {n} is not a perfect square")
    return r


def is_hermitian(a, tol=TOL):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, rtol=0, atol=tol)


def is_unitary(a, tol=TOL):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return np.allclose(a.conj().T @ a, np.eye(a.shape[0]), rtol=0, atol=tol)


def is_psd(a, tol=TOL):
    """Hermitian with smallest eigenvalue >= -tol."""
    if not is_hermitian(a, tol):
        return False
    a = np.asarray(a)
    return np.linalg.eigvalsh((a + a.conj().T) / 2).min() >= -tol


def index_mu(i, j, d):
    """Flat index of the matrix position ``(i, j)``: ``d*i + j``."""
    if d < 1:
        raise ArgumentError(f"dimension must be positive, got {d}")
    if not (0 <= i < d and 0 <= j < d):
        raise ArgumentError(f"index ({i}, {j}) out of range for d={d}")
    return d * i + j


def index_ij(mu, d):
    """Inverse of :func:`index_mu`."""
    if d < 1:
        raise ArgumentError(f"dimension must be positive, got {d}")
    if not 0 <= mu < d * d:
        raise ArgumentError(f"flat index {mu} out of range for d={d}")
    return divmod(mu, d)


def vec(a):
    """Row-stack a square matrix into a vector of length ``d**2``."""
    a = _as_square(a)
    return a.reshape(-1).copy()


def unvec(v, d=None):
    """Inverse of :func:`vec`. ``d`` is inferred from the length when omitted."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ArgumentError(f"expected a 1-d vector, got shape {v.shape}")
    if d is None:
        d = _isqrt(v.size, "vector length")
    if v.size != d * d:
        raise ArgumentError(f"vector of length {v.size} cannot be reshaped to {d}x{d}")
    return v.reshape(d, d).copy()


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr[a^dag b]``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    return np.vdot(a, b)


def kron(a, b):
    return np.kron(a, b)


def apply_sandwich(a, b, rho, check=True):
    """Return ``|a rho b>>`` computed as ``(a kron b^T) |rho>>``.

    With ``check`` the result is compared against ``vec(a @ rho @ b)``.
    """
    a, b, rho = _as_square(a, "a"), _as_square(b, "b"), _as_square(rho, "rho")
    if not a.shape == b.shape == rho.shape:
        raise ArgumentError(f"dimension mismatch {a.shape}, {b.shape}, {rho.shape}")
    out = np.kron(a, b.T) @ vec(rho)
    if check:
        direct = vec(a @ rho @ b)
        scale = max(1.0, np.abs(direct).max())
        if not np.allclose(out, direct, rtol=0, atol=1e-10 * scale):
            raise ArithmeticError("sandwich identity violated")
    return out


def vec2(gamma):
    """Row-stack a ``d^2 x d^2`` matrix into a vector of length ``d^4``."""
    gamma = _as_square(gamma, "superoperator")
    _isqrt(gamma.shape[0], "superoperator side")
    return gamma.reshape(-1).copy()


def unvec2(v):
    v = np.asarray(v)
    if v.ndim != 1:
        raise ArgumentError(f"expected a 1-d vector, got shape {v.shape}")
    side = _isqrt(v.size, "vector length")
    _isqrt(side, "superoperator side")
    return v.reshape(side, side).copy()


def reshuffle(gamma):
    """Apply the index swap ``Gamma_{ij;kl} -> Gamma_{ik;jl}`` to a superoperator.

    ``unvec2(beta_swap(d) @ vec2(gamma)) == reshuffle(gamma)``; this is the
    storage-free form of :func:`beta_swap`.  Maps ``|A>><<B|`` to ``A kron B*``
    and is its own inverse.
    """
    gamma = _as_square(gamma, "superoperator")
    d = _isqrt(gamma.shape[0], "superoperator side")
    t = gamma.reshape(d, d, d, d).transpose(0, 2, 1, 3)
    return t.reshape(d * d, d * d).copy()


def beta_swap_perm(d):
    """Index permutation ``p`` with ``(beta_swap(d) @ x) == x[p]``."""
    if d < 1:
        raise ArgumentError(f"dimension must be positive, got {d}")
    return np.arange(d**4).reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(-1)


def beta_swap(d):
    """Dense ``d^4 x d^4`` permutation ``sum |ij;kl)(ik;jl|``.

    Only sensible for small ``d``; use :func:`reshuffle` or
    :func:`beta_swap_perm` otherwise.
    """
    if d > 4:
        raise ArgumentError(f"refusing to materialize a {d**4}x{d**4} permutation; use reshuffle()")
    perm = beta_swap_perm(d)
    out = np.zeros((d**4, d**4))
    out[np.arange(d**4), perm] = 1.0
    return out


def max_entangled(d):
    """``|S+>> = |I>> / sqrt(d)``."""
    return vec(np.eye(d)) / np.sqrt(d)
