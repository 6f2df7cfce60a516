"""Hermitian spectral calculus.

Wrappers around numpy's Hermitian eigensolver with explicit support handling,
plus the scalar information quantities (entropy, relative entropy, log-fidelity)
that everything else in the package is built on.  All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import SupportViolationError, ValidationError

HERMITICITY_TOL = 1e-12
DEFAULT_SUPPORT_TOL = 1e-12


def _as_matrix(x) -> np.ndarray:
    m = np.asarray(getattr(x, "mat", x), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


class HermitianOperator:
    """A d x d complex matrix equal to its own conjugate transpose.

    The stored matrix is the exact input; validation only checks the
    Hermiticity defect against ``HERMITICITY_TOL``.
    """

    def __init__(self, entries):
        m = _as_matrix(entries)
        defect = np.abs(m - m.conj().T).max()
        if defect > HERMITICITY_TOL:
            raise ValidationError(
                f"matrix is not Hermitian: max |M - M^dag| = {defect:.3e}"
            )
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class DensityMatrix(HermitianOperator):
    """Hermitian, positive semidefinite, unit trace."""

    def __init__(self, entries):
        super().__init__(entries)
        tr = self.mat.trace()
        if abs(tr - 1.0) > 1e-12:
            raise ValidationError(f"trace {tr} is not 1")
        lo = np.linalg.eigvalsh(self.mat).min()
        if lo < -1e-12:
            raise ValidationError(f"negative eigenvalue {lo:.3e}")


class ProbabilityVector:
    """Nonnegative entries summing to one."""

    def __init__(self, entries):
        p = np.asarray(getattr(entries, "p", entries), dtype=float)
        if p.ndim != 1:
            raise ValidationError("probability vector must be one-dimensional")
        if p.min() < 0:
            raise ValidationError(f"negative entry {p.min():.3e}")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError(f"entries sum to {p.sum()}, not 1")
        self.p = p

    @property
    def dim(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with matching unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def spectral_decompose(h: Union[HermitianOperator, np.ndarray]) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    m = _as_matrix(h)
    if not isinstance(h, HermitianOperator):
        defect = np.abs(m - m.conj().T).max()
        if defect > 1e-10:
            raise ValidationError(f"matrix is not Hermitian (defect {defect:.3e})")
        m = (m + m.conj().T) / 2
    vals, vecs = np.linalg.eigh(m)
    return SpectralDecomposition(vals, vecs)


def matrix_function(
    h: Union[HermitianOperator, np.ndarray],
    f: Callable[[float], float],
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> HermitianOperator:
    """Apply a scalar map to the spectrum of ``h``.

    Eigenvalues with absolute value at most ``support_tol`` are treated as
    exact zeros and stay zero in the output (the 0 -> 0 convention for powers
    and x log x).  If ``f`` is undefined (nonfinite) on a retained eigenvalue,
    a SupportViolationError is raised naming it.
    """
    dec = spectral_decompose(h)
    vals = dec.eigenvalues
    out = np.zeros_like(vals)
    retained = np.abs(vals) > support_tol
    bad = []
    for i in np.nonzero(retained)[0]:
        try:
            with np.errstate(divide="ignore", invalid="ignore"):
                y = f(vals[i])
        except (ValueError, ZeroDivisionError):
            y = math.nan
        if not math.isfinite(y):
            bad.append(vals[i])
        else:
            out[i] = y
    if bad:
        raise SupportViolationError(
            f"scalar map undefined on eigenvalues {bad}", eigenvalues=bad
        )
    v = dec.eigenvectors
    mapped = (v * out) @ v.conj().T
    return HermitianOperator((mapped + mapped.conj().T) / 2)


def _spectrum_of_state(x) -> np.ndarray:
    if isinstance(x, ProbabilityVector):
        return x.p
    m = _as_matrix(x)
    return np.linalg.eigvalsh(m)


def entropy(x: Union[DensityMatrix, ProbabilityVector, np.ndarray]) -> float:
    """Von Neumann / Shannon entropy in nats, with the 0 log 0 = 0 convention."""
    p = _spectrum_of_state(x)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def relative_entropy(
    rho, sigma, support_tol: float = DEFAULT_SUPPORT_TOL
) -> float:
    """Tr rho (log rho - log sigma); +inf when supp(rho) is not inside supp(sigma)."""
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValidationError(f"dimension mismatch {r.shape} vs {s.shape}")
    svals, svecs = np.linalg.eigh(s)
    kernel = svals <= support_tol
    if kernel.any():
        k = svecs[:, kernel]
        leak = float(np.einsum("ij,jk,ki->", k.conj().T, r, k).real)
        if leak > 1e-10:
            return math.inf
    rvals, rvecs = np.linalg.eigh(r)
    rpos = rvals > support_tol
    h_term = float((rvals[rpos] * np.log(rvals[rpos])).sum())
    # Tr rho log sigma over the support of sigma
    weights = np.einsum("ij,jk,ki->i", svecs.conj().T, r, svecs).real
    cross = float((weights[~kernel] * np.log(svals[~kernel])).sum())
    val = h_term - cross
    return max(val, 0.0) if val > -1e-9 else val


def log_fidelity(rho, sigma, support_tol: float = DEFAULT_SUPPORT_TOL) -> float:
    """log Tr |rho^{1/2} sigma^{1/2}|, the log of the (root) fidelity.

    Always <= 0, with equality iff the states coincide.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValidationError(f"dimension mismatch {r.shape} vs {s.shape}")

    def _sqrt(m):
        vals, vecs = np.linalg.eigh(m)
        vals = np.where(vals > support_tol, vals, 0.0)
        return (vecs * np.sqrt(vals)) @ vecs.conj().T

    prod = _sqrt(r) @ _sqrt(s)
    sv = np.linalg.svd(prod, compute_uv=False)
    total = float(sv.sum())
    if total <= 0:
        raise SupportViolationError("states have orthogonal supports")
    return min(math.log(total), 0.0)
