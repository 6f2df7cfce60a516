"""Spectral calculus: decompositions, matrix functions, entropies, fidelity."""

import math

import numpy as np
import pytest

from sanovlab.errors import SupportViolationError, ValidationError
from sanovlab.spectral import (
    DensityMatrix,
    HermitianOperator,
    ProbabilityVector,
    entropy,
    log_fidelity,
    matrix_function,
    relative_entropy,
    spectral_decompose,
)

from conftest import random_density, random_hermitian


class TestValidation:
    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_trace_enforced(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.diag([0.7, 0.7]))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_probability_vector_sum(self):
        with pytest.raises(ValidationError):
            ProbabilityVector([0.5, 0.4])
        ProbabilityVector([0.25, 0.75])


class TestSpectralDecompose:
    def test_identity(self):
        dec = spectral_decompose(np.eye(3))
        assert np.allclose(dec.eigenvalues, 1.0)

    def test_diagonal_input(self):
        dec = spectral_decompose(np.diag([1 / 3, 2 / 3]))
        assert np.allclose(dec.eigenvalues, [1 / 3, 2 / 3])

    def test_ascending_order(self, rng):
        dec = spectral_decompose(random_hermitian(rng, 5))
        assert np.all(np.diff(dec.eigenvalues) >= 0)

    def test_reconstruction_1000_random(self, rng):
        for _ in range(1000):
            d = int(rng.integers(2, 9))
            h = random_hermitian(rng, d)
            dec = spectral_decompose(h)
            assert np.abs(dec.reconstruct() - h).max() <= 1e-10
            v = dec.eigenvectors
            assert np.abs(v.conj().T @ v - np.eye(d)).max() <= 1e-10


class TestMatrixFunction:
    def test_square_of_half_identity(self):
        out = matrix_function(np.eye(2) / 2, lambda x: x**2).mat
        assert np.allclose(out, np.eye(2) / 4)

    def test_projector_fixed_by_sqrt(self):
        p = np.diag([1.0, 0.0])
        out = matrix_function(p, np.sqrt).mat
        assert np.allclose(out, p)

    def test_power_composition(self, rng):
        for _ in range(20):
            rho = random_density(rng, 4)
            root = matrix_function(rho, np.sqrt).mat
            assert np.abs(root @ root - rho).max() <= 1e-10

    def test_log_of_singular_raises(self):
        with pytest.raises(SupportViolationError) as exc:
            matrix_function(np.diag([1.0, 0.0]), np.log, support_tol=-1.0)
        assert exc.value.eigenvalues is not None

    def test_zero_preserved_under_support_tol(self):
        out = matrix_function(np.diag([1.0, 0.0]), np.log)
        # the kernel stays exactly zero under the 0 -> 0 convention
        assert out.mat[1, 1] == 0.0


class TestEntropy:
    def test_pure_state_zero(self):
        assert entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)

    def test_uniform_two_level(self):
        assert entropy(ProbabilityVector([0.5, 0.5])) == pytest.approx(math.log(2))

    def test_third_two_thirds(self):
        expected = math.log(3) - (2 / 3) * math.log(2)
        assert entropy(np.diag([1 / 3, 2 / 3])) == pytest.approx(expected, abs=1e-12)

    def test_bounds_random(self, rng):
        for _ in range(50):
            d = int(rng.integers(2, 7))
            h = entropy(random_density(rng, d))
            assert -1e-12 <= h <= math.log(d) + 1e-12


class TestRelativeEntropy:
    def test_self_zero(self, rng):
        rho = random_density(rng, 3)
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)

    def test_pure_vs_mixed(self):
        assert relative_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2) == pytest.approx(
            math.log(2)
        )

    def test_disjoint_supports_infinite(self):
        assert relative_entropy(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == math.inf

    def test_klein_inequality(self, rng):
        for _ in range(100):
            d = int(rng.integers(2, 6))
            rho, sigma = random_density(rng, d), random_density(rng, d)
            val = relative_entropy(rho, sigma)
            assert val >= -1e-10
            if val < 1e-10:
                assert np.abs(rho - sigma).max() <= 1e-8


class TestLogFidelity:
    def test_self_zero(self, rng):
        rho = random_density(rng, 3)
        assert log_fidelity(rho, rho) == pytest.approx(0.0, abs=1e-10)

    def test_mixed_vs_pure(self):
        val = log_fidelity(np.eye(2) / 2, np.diag([1.0, 0.0]))
        assert val == pytest.approx(-0.5 * math.log(2), abs=1e-10)

    def test_commuting_bhattacharyya(self):
        p = np.array([1 / 3, 2 / 3])
        q = np.array([0.2, 0.8])
        val = log_fidelity(np.diag(p), np.diag(q))
        assert val == pytest.approx(math.log(np.sum(np.sqrt(p * q))), abs=1e-10)

    def test_symmetry(self, rng):
        for _ in range(30):
            rho, sigma = random_density(rng, 4), random_density(rng, 4)
            assert log_fidelity(rho, sigma) == pytest.approx(
                log_fidelity(sigma, rho), abs=1e-10
            )

    def test_nonpositive(self, rng):
        for _ in range(30):
            assert log_fidelity(random_density(rng, 3), random_density(rng, 3)) <= 0.0
