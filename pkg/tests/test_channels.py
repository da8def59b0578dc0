import itertools
import json

import numpy as np
import pytest

from sqptlab import channels as ch
from sqptlab import vecrep
from sqptlab.errors import ArgumentError, RepresentationError

from conftest import haar_unitary, rand_state

PAULIS = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]


def zoo(d):
    out = [ch.identity_channel(d), ch.depolarizing(d, 0.3), ch.random_channel(d, 2, 11)]
    if d == 2:
        out.append(ch.amplitude_damping(0.4))
    return out


def test_kraus_set_validation():
    with pytest.raises(ArgumentError):
        ch.KrausSet([2 * np.eye(2)])
    with pytest.raises(ArgumentError):
        ch.KrausSet(np.zeros((2, 2, 3)))
    k = ch.KrausSet(np.eye(3))
    assert k.d == 3 and len(k) == 1


def test_apply_identity_and_full_depolarizing(rng):
    rho = rand_state(rng, 3)
    assert np.allclose(ch.apply(ch.identity_channel(3), rho), rho)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    psi /= np.linalg.norm(psi)
    out = ch.apply(ch.depolarizing(2, 1.0), np.outer(psi, psi.conj()))
    assert np.abs(out - np.eye(2) / 2).max() < 1e-12
    with pytest.raises(ArgumentError):
        ch.apply(ch.identity_channel(2), np.eye(3))


def test_apply_preserves_trace(rng):
    k = ch.random_channel(3, 4, 3)
    rho = rand_state(rng, 3)
    assert abs(np.trace(ch.apply(k, rho)) - 1) < 1e-12


def test_chi_c_identity_channel():
    s = vecrep.max_entangled(2)
    assert np.allclose(ch.chi_c(ch.identity_channel(2)), 2 * np.outer(s, s))


@pytest.mark.parametrize("q", [0.0, 0.3, 1.0])
def test_chi_c_depolarizing_is_werner(q):
    s = vecrep.max_entangled(2)
    expected = 2 * ((1 - q) * np.outer(s, s) + q / 4 * np.eye(4))
    assert np.abs(ch.chi_c(ch.depolarizing(2, q)) - expected).max() < 1e-12
    assert np.abs(ch.choi(ch.depolarizing(2, q)) - expected / 2).max() < 1e-12


def test_chi_c_entries_by_summation():
    k = ch.random_channel(2, 3, 5)
    chi = ch.chi_c(k)
    for i, j, kk, l in itertools.product(range(2), repeat=4):
        direct = sum(e[i, j] * np.conj(e[kk, l]) for e in k.ops)
        assert abs(chi[2 * i + j, 2 * kk + l] - direct) < 1e-14


def test_lambda_c_examples(rng):
    assert np.allclose(ch.lambda_c(ch.identity_channel(3)), np.eye(9))
    u = haar_unitary(rng, 3)
    assert np.allclose(ch.lambda_c(ch.unitary_channel(u)), np.kron(u, u.conj()))
    lam = ch.lambda_c(ch.depolarizing(2, 1.0))
    for _ in range(5):
        rho = rand_state(rng, 2)
        assert np.allclose(lam @ vecrep.vec(rho), vecrep.vec(np.eye(2) / 2))


def test_choi_of_random_channel():
    rho = ch.choi(ch.random_channel(3, 2, 9))
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-10


@pytest.mark.parametrize("d", [2, 3])
def test_representation_properties(rng, d):
    kset = zoo(d) + [ch.random_channel(d, 1 + i % (d * d), 100 + i) for i in range(50)]
    for k in kset:
        rho = rand_state(rng, d)
        lam, chi = ch.lambda_c(k), ch.chi_c(k)
        assert np.abs(lam @ vecrep.vec(rho) - vecrep.vec(ch.apply(k, rho))).max() < 1e-10
        assert abs(np.trace(chi) - d) < 1e-10
        assert vecrep.is_hermitian(chi) and np.linalg.eigvalsh(chi).min() >= -1e-10
        assert np.abs(ch.chi_from_lambda(lam) - chi).max() < 1e-12
        assert np.abs(ch.lambda_from_chi(chi) - lam).max() < 1e-12
        # double-sum (Jamiolkowski) form of the action
        assert np.abs(ch.jamiolkowski_apply(chi, rho) - ch.apply(k, rho)).max() < 1e-10
        assert np.abs(d * np.einsum("ijkl,jl->ik", ch.choi(k).reshape(d, d, d, d), rho) - ch.apply(k, rho)).max() < 1e-10


def test_chi_lambda_conversion_examples():
    k = ch.identity_channel(2)
    s = vecrep.max_entangled(2)
    assert np.allclose(ch.chi_from_lambda(np.eye(4)), 2 * np.outer(s, s))
    dep = ch.depolarizing(2, 0.3)
    assert np.allclose(ch.lambda_from_chi(ch.chi_c(dep)), ch.lambda_c(dep))
    assert np.allclose(ch.chi_from_lambda(ch.lambda_c(dep)), ch.chi_c(dep))
    rnd = ch.random_channel(2, 3, 1)
    assert np.abs(ch.lambda_from_chi(ch.chi_from_lambda(ch.lambda_c(rnd))) - ch.lambda_c(rnd)).max() < 1e-12
    assert np.allclose(ch.chi_c(k), ch.chi_from_lambda(ch.lambda_c(k)))


def test_kraus_from_chi_identity():
    k = ch.kraus_from_chi(ch.chi_c(ch.identity_channel(3)))
    assert len(k) == 1
    assert np.allclose(k.ops[0], np.eye(3))


def test_kraus_from_chi_depolarizing():
    chi = ch.chi_c(ch.depolarizing(2, 0.5))
    k = ch.kraus_from_chi(chi)
    assert len(k) == 4
    assert np.abs(ch.chi_c(k) - chi).max() < 1e-10


def test_kraus_from_chi_action(rng):
    k = ch.random_channel(3, 4, 21)
    k2 = ch.kraus_from_chi(ch.chi_c(k))
    rho = rand_state(rng, 3)
    assert np.abs(ch.apply(k, rho) - ch.apply(k2, rho)).max() < 1e-10


def test_kraus_from_chi_is_deterministic_and_phase_fixed():
    chi = ch.chi_c(ch.random_channel(2, 3, 2))
    a, b = ch.kraus_from_chi(chi), ch.kraus_from_chi(chi.copy())
    assert np.array_equal(a.ops, b.ops)
    for e in a.ops:
        v = vecrep.vec(e)
        lead = v[np.flatnonzero(np.abs(v) > 1e-8 * np.abs(v).max())[0]]
        assert abs(lead.imag) < 1e-14 and lead.real > 0


def test_kraus_from_chi_rejects_non_psd():
    with pytest.raises(RepresentationError):
        ch.kraus_from_chi(np.diag([1.0, -0.5, 1.0, 0.5]))
    with pytest.raises(RepresentationError):
        ch.kraus_from_chi(np.array([[1, 1], [0, 1.0]]))


def test_depolarizing_kraus_against_pauli_mixture(rng):
    q = 0.3
    rho = rand_state(rng, 2)
    ref = (1 - 3 * q / 4) * rho + q / 4 * sum(p @ rho @ p.conj().T for p in PAULIS[1:])
    assert np.allclose(ch.apply(ch.depolarizing(2, q), rho), ref)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_depolarizing_action_and_unitality(rng, d):
    q = 0.37
    k = ch.depolarizing(d, q)
    rho = rand_state(rng, d)
    assert np.allclose(ch.apply(k, rho), (1 - q) * rho + q * np.eye(d) / d)
    assert np.abs(ch.apply(k, np.eye(d)) - np.eye(d)).max() < 1e-12
    assert np.allclose(ch.apply(ch.depolarizing(d, 0.0), rho), rho)


def test_weyl_operators_d2_are_paulis_up_to_phase():
    ws = ch.weyl_operators(2)
    for w in ws:
        assert any(abs(abs(vecrep.hs_inner(p, w)) - 2) < 1e-12 for p in PAULIS)


def test_amplitude_damping():
    k = ch.amplitude_damping(0.4)
    out = ch.apply(k, np.diag([0.0, 1.0]))
    assert np.allclose(out, np.diag([0.4, 0.6]))
    assert not np.allclose(ch.apply(k, np.eye(2)), np.eye(2))


def test_random_channel_deterministic_and_tp():
    a = ch.make_channel({"kind": "random", "d": 2, "rank": 4, "seed": 7})
    b = ch.make_channel({"kind": "random", "d": 2, "rank": 4, "seed": 7})
    assert np.array_equal(a.ops, b.ops)
    assert np.abs(np.einsum("mki,mkj->ij", a.ops.conj(), a.ops) - np.eye(2)).max() < 1e-12
    c = ch.make_channel({"kind": "random", "d": 2, "rank": 4, "seed": 8})
    assert not np.allclose(a.ops, c.ops)


def test_make_channel_from_spec_variants(rng):
    u = haar_unitary(rng, 2)
    spec = ch.ChannelSpec.from_json(json.dumps({"kind": "unitary", "U": ch.matrix_to_pairs(u)}))
    assert spec.d == 2
    assert np.allclose(ch.make_channel(spec).ops[0], u)
    kl = {"kind": "kraus-list", "ops": ch.matrix_to_pairs(ch.amplitude_damping(0.2).ops)}
    assert np.allclose(ch.make_channel(kl).ops, ch.amplitude_damping(0.2).ops)
    assert ch.make_channel({"kind": "amplitude-damping", "gamma": 0.1}).d == 2


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "depolarizing", "d": 2, "q": 1.5},
        {"kind": "depolarizing", "d": 2},
        {"kind": "amplitude-damping", "d": 3, "gamma": 0.2},
        {"kind": "amplitude-damping", "gamma": -0.1},
        {"kind": "unitary", "U": [[[2, 0], [0, 0]], [[0, 0], [1, 0]]]},
        {"kind": "random", "d": 2, "rank": 0, "seed": 1},
        {"kind": "bogus", "d": 2},
        {"d": 2},
    ],
)
def test_make_channel_rejects_bad_params(spec):
    with pytest.raises(ArgumentError):
        ch.make_channel(spec)


def test_channel_spec_json_round_trip():
    spec = ch.ChannelSpec("depolarizing", 2, {"q": 0.3})
    assert json.loads(spec.to_json()) == {"kind": "depolarizing", "d": 2, "q": 0.3}
    assert ch.ChannelSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ArgumentError):
        ch.ChannelSpec.from_json("{not json")
