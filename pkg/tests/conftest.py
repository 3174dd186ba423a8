import numpy as np
import pytest

from fiberarray.hilbert import basis_state, density_from_pure

SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)
BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def random_matrix(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def random_density(rng, d, rank=None):
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, d=2):
    q, r = np.linalg.qr(random_matrix(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def projector(label):
    return density_from_pure(basis_state(label))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
