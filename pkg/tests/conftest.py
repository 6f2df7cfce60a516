import numpy as np
import pytest


def random_hermitian(rng, d):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (m + m.conj().T) / 2


def random_density(rng, d, full_support=True):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = m @ m.conj().T
    if full_support:
        rho += 0.05 * np.eye(d)
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
