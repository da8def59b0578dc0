import itertools

import numpy as np
import pytest

from sqptlab import vecrep
from sqptlab.errors import ArgumentError

from conftest import rand_op


def test_index_mu_examples():
    assert vecrep.index_mu(0, 0, 2) == 0
    assert vecrep.index_mu(1, 0, 2) == 2
    assert vecrep.index_mu(2, 1, 3) == 7


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_index_mu_is_bijection(d):
    seen = [vecrep.index_mu(i, j, d) for i, j in itertools.product(range(d), repeat=2)]
    assert sorted(seen) == list(range(d * d))
    for mu in range(d * d):
        assert vecrep.index_mu(*vecrep.index_ij(mu, d), d) == mu


@pytest.mark.parametrize("args", [(2, 0, 2), (0, -1, 2), (0, 3, 3)])
def test_index_mu_out_of_range(args):
    with pytest.raises(ArgumentError):
        vecrep.index_mu(*args)


def test_vec_matrix_unit_is_basis_vector():
    d = 3
    c12 = np.zeros((d, d))
    c12[1, 2] = 1
    v = vecrep.vec(c12)
    assert v[vecrep.index_mu(1, 2, d)] == 1 and np.count_nonzero(v) == 1


def test_vec_identity_and_maximally_entangled():
    d = 3
    v = vecrep.vec(np.eye(d))
    expected = np.zeros(d * d)
    expected[[vecrep.index_mu(k, k, d) for k in range(d)]] = 1
    assert np.array_equal(v, expected)
    # |A>> = sqrt(d) (A kron I)|S+>>
    a = rand_op(np.random.default_rng(1), d)
    assert np.allclose(np.sqrt(d) * np.kron(a, np.eye(d)) @ vecrep.max_entangled(d), vecrep.vec(a))


def test_vec_unvec_round_trip(rng):
    for d in (3, 4):
        a = rand_op(rng, d)
        assert np.array_equal(vecrep.unvec(vecrep.vec(a), d), a)
    sx = np.array([[0, 1], [1, 0]])
    assert np.array_equal(vecrep.unvec(vecrep.vec(sx)), sx)
    assert np.array_equal(vecrep.unvec(np.zeros(4)), np.zeros((2, 2)))


def test_vec_errors():
    with pytest.raises(ArgumentError):
        vecrep.vec(np.zeros((2, 3)))
    with pytest.raises(ArgumentError):
        vecrep.unvec(np.zeros(5))
    with pytest.raises(ArgumentError):
        vecrep.unvec(np.zeros(4), 3)


def test_hs_inner_matrix_units():
    d = 2
    units = np.eye(d * d).reshape(d * d, d, d)
    for a, b in itertools.product(range(d * d), repeat=2):
        assert vecrep.hs_inner(units[a], units[b]) == (a == b)
    assert vecrep.hs_inner(np.eye(3), np.eye(3)) == 3
    with pytest.raises(ArgumentError):
        vecrep.hs_inner(np.eye(2), np.eye(3))


@pytest.mark.parametrize("d", [2, 3])
def test_hs_inner_isometry(rng, d):
    for _ in range(100):
        a, b = rand_op(rng, d), rand_op(rng, d)
        direct = sum(np.conj(a[i, j]) * b[i, j] for i in range(d) for j in range(d))
        assert abs(vecrep.hs_inner(a, b) - direct) < 1e-12
        assert abs(np.dot(vecrep.vec(a).conj(), vecrep.vec(b)) - np.trace(a.conj().T @ b)) < 1e-12


def test_kron_definition(rng):
    a, b = rand_op(rng, 2), rand_op(rng, 2)
    k = vecrep.kron(a, b)
    for i, j, kk, l in itertools.product(range(2), repeat=4):
        assert abs(k[vecrep.index_mu(i, kk, 2), vecrep.index_mu(j, l, 2)] - a[i, j] * b[kk, l]) < 1e-14
    assert np.array_equal(vecrep.kron(np.eye(2), np.eye(2)), np.eye(4))
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    v01 = np.zeros(4)
    v01[vecrep.index_mu(0, 1, 2)] = 1
    assert np.array_equal(vecrep.kron(p0, p1), np.outer(v01, v01))


def test_apply_sandwich_examples():
    rho = np.diag([1.0, 0.0])
    assert np.array_equal(vecrep.apply_sandwich(np.eye(2), np.eye(2), rho), vecrep.vec(rho))
    sx = np.array([[0, 1], [1, 0]])
    assert np.allclose(vecrep.apply_sandwich(sx, sx, rho), vecrep.vec(np.diag([0.0, 1.0])))
    with pytest.raises(ArgumentError):
        vecrep.apply_sandwich(np.eye(2), np.eye(3), np.eye(2))


@pytest.mark.parametrize("d", [2, 3])
def test_sandwich_identity(rng, d):
    for _ in range(100):
        a, b, rho = rand_op(rng, d), rand_op(rng, d), rand_op(rng, d)
        out = vecrep.apply_sandwich(a, b, rho, check=False)
        assert np.abs(out - vecrep.vec(a @ rho @ b)).max() < 1e-12


def test_vec2_basis_and_identity():
    d = 2
    ij, kl = vecrep.index_mu(0, 1, d), vecrep.index_mu(1, 1, d)
    c = np.zeros((4, 4))
    c[ij, kl] = 1
    v = vecrep.vec2(c)
    assert v[4 * ij + kl] == 1 and np.count_nonzero(v) == 1
    v = vecrep.vec2(np.eye(4))
    assert np.array_equal(np.flatnonzero(v), [5 * m for m in range(4)])
    with pytest.raises(ArgumentError):
        vecrep.vec2(np.eye(3))


def test_vec2_round_trip(rng):
    g = rand_op(rng, 4)
    assert np.array_equal(vecrep.unvec2(vecrep.vec2(g)), g)


def _beta_by_definition(d):
    b = np.zeros((d**4, d**4))
    for i, j, k, l in itertools.product(range(d), repeat=4):
        row = (d * i + j) * d * d + (d * k + l)
        col = (d * i + k) * d * d + (d * j + l)
        b[row, col] = 1
    return b


@pytest.mark.parametrize("d", [2, 3])
def test_beta_swap_is_symmetric_involutive_permutation(d):
    b = vecrep.beta_swap(d)
    assert np.array_equal(b, _beta_by_definition(d))
    assert set(np.unique(b)) == {0.0, 1.0}
    assert np.array_equal(b.sum(axis=0), np.ones(d**4)) and np.array_equal(b.sum(axis=1), np.ones(d**4))
    assert np.array_equal(b, b.T)
    assert np.array_equal(b @ b, np.eye(d**4))


def test_beta_swap_identity_example():
    i_vec = vecrep.vec(np.eye(2))
    out = vecrep.beta_swap(2) @ vecrep.vec2(np.outer(i_vec, i_vec))
    assert np.array_equal(out, vecrep.vec2(np.eye(4)))


@pytest.mark.parametrize("d", [2, 3])
def test_beta_swap_maps_outer_to_kron(rng, d):
    b = vecrep.beta_swap(d)
    for _ in range(50):
        x, y = rand_op(rng, d), rand_op(rng, d)
        lhs = b @ vecrep.vec2(np.outer(vecrep.vec(x), vecrep.vec(y).conj()))
        assert np.abs(lhs - vecrep.vec2(np.kron(x, y.conj()))).max() < 1e-12
        assert np.allclose(vecrep.reshuffle(np.outer(vecrep.vec(x), vecrep.vec(y).conj())), np.kron(x, y.conj()))


def test_beta_swap_perm_matches_dense():
    x = np.arange(16.0)
    assert np.array_equal(vecrep.beta_swap(2) @ x, x[vecrep.beta_swap_perm(2)])


def test_predicates():
    assert vecrep.is_hermitian(np.array([[1, 1j], [-1j, 0]]))
    assert not vecrep.is_hermitian(np.array([[1, 1j], [1j, 0]]))
    assert vecrep.is_unitary(np.array([[0, 1], [1, 0]]))
    assert not vecrep.is_unitary(2 * np.eye(2))
    assert vecrep.is_psd(np.diag([1.0, 0.0]))
    assert not vecrep.is_psd(np.diag([1.0, -1e-3]))
    assert vecrep.is_psd(np.diag([1.0, -1e-3]), tol=1e-2)
