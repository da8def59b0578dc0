import sys

import numpy as np
import pytest

from sqptlab import frames, sic


def rand_op(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def rand_state(rng, d):
    a = rand_op(rng, d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def rand_hermitian(rng, d):
    a = rand_op(rng, d)
    return (a + a.conj().T) / 2


def generic_frame(rng, d, max_condition=1e6):
    """Seeded random Hermitian frame, redrawn until reasonably conditioned."""
    while True:
        ops = [rand_hermitian(rng, d) for _ in range(d * d)]
        try:
            return frames.build_frame(ops, max_condition=max_condition)
        except frames.FrameError:
            continue


def haar_unitary(rng, d):
    z = rand_op(rng, d) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture(scope="session")
def sic2():
    return sic.sic_d2()


@pytest.fixture(scope="session")
def sic3():
    return sic.sic_search(3, seed=1)[0]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
