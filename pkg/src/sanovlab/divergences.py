"""Sandwiched and Petz divergence functionals.

The central object is phi(t|A||B) = log Tr (B^{t/(2(1-t))} A B^{t/(2(1-t))})^{1-t}.
For t close to 1 the inner power exponent blows up and the conjugated matrix
has eigenvalues spread over thousands of orders of magnitude, far beyond what
a double-precision eigensolver can resolve.  We therefore evaluate the
log-eigenvalues of B^q A B^q directly: writing B = V diag(p) V^dag, the nonzero
eigenvalues are the squared singular values of A^{1/2} V diag(p^q), a strongly
column-graded matrix.  A Gram-Schmidt sweep through the columns in descending
p order yields each log-eigenvalue as 2(q log p_j + log ||residual_j||), which
is exact in the strong-grading limit and never underflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, NumericalInstabilityError, SupportViolationError, ValidationError
from .spectral import DEFAULT_SUPPORT_TOL, _as_matrix

# Beyond this spread of 2*q*log(p) the plain eigensolver loses the small
# eigenvalues to roundoff and the graded path takes over.
_GRADED_THRESHOLD = 13.0

# Columns whose grading exponents differ by more than this (in log units)
# decouple: cross-cluster coupling perturbs eigenvalues by ~e^{-gap}.
_CLUSTER_SPLIT = 80.0

# Descending s-schedule for the limit defining d_hat; the last four points
# feed the polynomial extrapolation.
D_HAT_SCHEDULE = [2.0 ** (-k) for k in range(4, 15)]


def _sqrt_psd(m: np.ndarray, tol: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    vals = np.where(vals > tol, vals, 0.0)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def _log_eigs_conjugated(a: np.ndarray, b: np.ndarray, q: float, tol: float) -> np.ndarray:
    """Log-eigenvalues (nonzero part) of B^q A B^q for PSD A, B and q >= 0."""
    pvals, pvecs = np.linalg.eigh(b)
    sup = pvals > tol
    if not sup.any():
        raise SupportViolationError("second argument has empty support")
    p = pvals[sup]
    v = pvecs[:, sup]
    order = np.argsort(-p)
    p = p[order]
    v = v[:, order]
    logp = np.log(p)

    spread = 2.0 * q * (logp[0] - logp[-1])
    if spread < _GRADED_THRESHOLD:
        # Small relative dynamic range: a direct Hermitian solve is accurate
        # once the leading scale p_max^q is factored out.
        bq = (v * np.exp(q * (logp - logp[0]))) @ v.conj().T
        m = bq @ a @ bq
        m = (m + m.conj().T) / 2
        mu = np.linalg.eigh(m)[0]
        mu = mu[mu > max(tol, 1e-14 * max(mu.max(), 0.0))]
        if mu.size == 0:
            raise SupportViolationError("supports of the two states do not overlap")
        return np.log(mu) + 2.0 * q * logp[0]

    # Graded path.  The nonzero spectrum of B^q A B^q equals that of the Gram
    # matrix of the columns of W = A^{1/2} V diag(p^q).  Columns are grouped
    # into clusters of comparable grading exponent q*log p; clusters separated
    # by more than _CLUSTER_SPLIT decouple (coupling ~e^{-gap}) and each
    # cluster's Gram matrix, with its scale factors applied in extended
    # precision, yields that cluster's log-eigenvalues to full relative
    # accuracy regardless of the overall spread.
    c = _sqrt_psd(a, tol) @ v
    norms = np.linalg.norm(c, axis=0)
    ell = q * logp  # per-column log grading scale
    clusters: list[list[int]] = [[0]]
    for j in range(1, len(ell)):
        if 2.0 * (ell[clusters[-1][-1]] - ell[j]) > _CLUSTER_SPLIT:
            clusters.append([j])
        else:
            clusters[-1].append(j)

    qbasis = np.zeros((c.shape[0], 0), dtype=complex)
    logs: list[float] = []
    for cluster in clusters:
        kept_cols = []
        scales = []  # log scale of each kept residual column
        for j in cluster:
            if norms[j] <= tol:
                continue  # column annihilated by A's kernel
            col = c[:, j].copy()
            for _ in range(2):  # reorthogonalize once for stability
                col -= qbasis @ (qbasis.conj().T @ col)
            nrm = np.linalg.norm(col)
            if nrm <= 1e-10 * norms[j]:
                # Linearly dependent on higher-graded columns: the eigenvalue
                # lives at a strictly lower grading order and is dropped.
                continue
            kept_cols.append(col / nrm)
            scales.append(ell[j] + math.log(nrm))
        if not kept_cols:
            continue
        if len(kept_cols) == 1:
            logs.append(2.0 * scales[0])
        else:
            logs.extend(_graded_gram_eigs(np.stack(kept_cols, axis=1), scales))
        for u in kept_cols:
            # orthonormalize into the running basis for later clusters
            resid = u - qbasis @ (qbasis.conj().T @ u)
            nrm = np.linalg.norm(resid)
            if nrm > 1e-12:
                qbasis = np.concatenate([qbasis, resid[:, None] / nrm], axis=1)
    if not logs:
        raise SupportViolationError("supports of the two states do not overlap")
    return np.asarray(sorted(logs, reverse=True))


def _graded_gram_eigs(u: np.ndarray, scales: Sequence[float]) -> list[float]:
    """Log-eigenvalues of diag(e^s) (U^dag U) diag(e^s) in extended precision.

    U has unit columns, so the Gram entries carry full relative accuracy and
    the exact scale factors are applied in mpmath; working precision grows
    with the intra-cluster scale spread.
    """
    import itertools

    import mpmath as mp

    m = u.shape[1]
    s = np.asarray(scales, dtype=float)
    s0 = s.max()
    spread = 2.0 * (s0 - s.min())
    gram = u.conj().T @ u
    # Characteristic-polynomial roots rather than an iterative eigensolver:
    # mpmath's QR iteration stops at absolute (norm-scale) accuracy, which
    # wipes out the graded small eigenvalues, while the elementary symmetric
    # coefficients are dominated by products of the leading eigenvalues and
    # keep full relative accuracy at any spread.
    with mp.workdps(60 + int(2.0 * spread / math.log(10.0))):
        g = [
            [
                mp.mpc(gram[i, j])
                * mp.e ** (mp.mpf(s[i] - s0) + mp.mpf(s[j] - s0))
                for j in range(m)
            ]
            for i in range(m)
        ]
        elems = [mp.mpf(1)]
        for k in range(1, m + 1):
            e_k = mp.mpf(0)
            for rows in itertools.combinations(range(m), k):
                sub = mp.matrix([[g[i][j] for j in rows] for i in rows])
                e_k += mp.det(sub).real
            elems.append(e_k)
        coeffs = [(-1) ** k * elems[k] for k in range(m + 1)]
        # Roots descend in magnitude like the grading, so e_k/e_{k-1} seeds
        # each one; Newton polishes and synthetic division deflates downward.
        floor = mp.e ** (-mp.mpf(spread) - 40)
        work = list(coeffs)
        out = []
        for k in range(1, m + 1):
            if elems[k] <= 0 or elems[k - 1] <= 0:
                break  # remaining eigenvalues vanish at working precision
            x = elems[k] / elems[k - 1]
            for _ in range(200):
                pv, pd = mp.polyval(work, x, derivative=True)
                if pd == 0:
                    break
                step = pv / pd
                x_new = x - step
                if x_new <= 0:
                    x_new = x / 2
                if abs(x_new - x) <= abs(x) * mp.eps * 10:
                    x = x_new
                    break
                x = x_new
            if x <= floor:
                break
            out.append(2.0 * float(s0) + float(mp.log(x)))
            # deflate: divide the working polynomial by (t - x)
            new_work = [work[0]]
            for cc in work[1:-1]:
                new_work.append(cc + new_work[-1] * x)
            work = new_work
    return out


def phi_sandwich(t: float, a, b, support_tol: float = DEFAULT_SUPPORT_TOL) -> float:
    """phi(t|A||B) = log Tr (B^{t/(2(1-t))} A B^{t/(2(1-t))})^{1-t} for t in (0,1).

    Singular B uses the 0 -> 0 convention for the inner power.  Raises
    SupportViolationError when the conjugation annihilates A entirely.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"order t={t} outside (0,1)")
    am = _as_matrix(a)
    bm = _as_matrix(b)
    if am.shape != bm.shape:
        raise ValidationError(f"dimension mismatch {am.shape} vs {bm.shape}")
    q = t / (2.0 * (1.0 - t))
    logmu = _log_eigs_conjugated(am, bm, q, support_tol)
    return float(logsumexp((1.0 - t) * logmu))


def phi_petz(s: float, rho, sigma, support_tol: float = DEFAULT_SUPPORT_TOL) -> float:
    """Petz functional log Tr rho^{1-s} sigma^s for s in [0, 1]."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"order s={s} outside [0,1]")
    r = _as_matrix(rho)
    g = _as_matrix(sigma)
    if r.shape != g.shape:
        raise ValidationError(f"dimension mismatch {r.shape} vs {g.shape}")

    def _power(m, e):
        vals, vecs = np.linalg.eigh(m)
        out = np.where(vals > support_tol, vals, 0.0)
        pos = out > 0
        out[pos] = np.exp(e * np.log(out[pos]))
        return (vecs * out) @ vecs.conj().T

    val = (_power(r, 1.0 - s) @ _power(g, s)).trace().real
    if val <= 0:
        raise SupportViolationError("Tr rho^{1-s} sigma^s vanished")
    return float(math.log(val))


def sandwiched_renyi(alpha: float, rho, sigma, support_tol: float = DEFAULT_SUPPORT_TOL) -> float:
    """Sandwiched Renyi divergence D_alpha = phi(1-alpha|rho||sigma)/(alpha-1)."""
    if alpha == 1.0:
        raise DomainError("alpha=1 is the relative-entropy limit, not a Renyi order")
    t = 1.0 - alpha
    if not -1.0 < t < 1.0 or t == 0.0:
        raise DomainError(f"alpha={alpha} outside the supported reparameterized range")
    if t > 0:
        return float(phi_sandwich(t, rho, sigma, support_tol) / (alpha - 1.0))
    # alpha > 1: phi(-s|rho||sigma) with s = alpha-1; inner exponent is negative,
    # so flip to the equivalent positive-power form via q -> t/(2(1-t)) directly.
    q = t / (2.0 * (1.0 - t))  # negative
    r = _as_matrix(rho)
    g = _as_matrix(sigma)
    vals, vecs = np.linalg.eigh(g)
    if vals.min() <= support_tol:
        raise SupportViolationError(
            "negative powers of a singular second argument", eigenvalues=[vals.min()]
        )
    gq = (vecs * vals**q) @ vecs.conj().T
    m = gq @ r @ gq
    mu = np.linalg.eigh((m + m.conj().T) / 2)[0]
    mu = mu[mu > 0]
    phi = float(logsumexp((1.0 - t) * np.log(mu)))
    return phi / (alpha - 1.0)


def _extrapolate_to_zero(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Neville polynomial extrapolation of (x, y) samples to x = 0."""
    t = list(ys)
    x = list(xs)
    n = len(t)
    for level in range(1, n):
        for i in range(n - level):
            t[i] = t[i + 1] + (t[i] - t[i + 1]) * x[i + level] / (x[i + level] - x[i])
    return t[0]


def d_hat(rho, sigma, support_tol: float = DEFAULT_SUPPORT_TOL) -> float:
    """The relative-entropy-like limit lim_{s->0} -phi(1-s|sigma||rho)/s.

    Evaluated on a descending geometric s-schedule.  Convexity of the phi curve
    makes the sampled values a nondecreasing sequence as s decreases; a breach
    of that monotonicity beyond tolerance signals numerical trouble and raises
    NumericalInstabilityError instead of returning a wrong number.
    """
    vals = []
    for s in D_HAT_SCHEDULE:
        vals.append(-phi_sandwich(1.0 - s, sigma, rho, support_tol) / s)
    scale = 1.0 + max(abs(v) for v in vals)
    for prev, nxt in zip(vals, vals[1:]):
        if nxt < prev - 1e-7 * scale:
            raise NumericalInstabilityError(
                f"d_hat sequence not monotone: {prev} -> {nxt} on schedule {D_HAT_SCHEDULE}"
            )
    return float(_extrapolate_to_zero(D_HAT_SCHEDULE[-4:], vals[-4:]))


@dataclass
class PhiCurve:
    """phi(s|left||right) sampled on a grid of orders in (0,1)."""

    orders: np.ndarray
    values: np.ndarray
    left: object = field(repr=False, default=None)
    right: object = field(repr=False, default=None)

    def convexity_defect(self) -> float:
        """Largest violation of midpoint convexity over consecutive triples."""
        v = self.values
        if len(v) < 3:
            return 0.0
        mid = (v[:-2] + v[2:]) / 2
        return float(np.max(v[1:-1] - mid))


def phi_curve(rho, sigma, orders: Sequence[float], support_tol: float = DEFAULT_SUPPORT_TOL) -> PhiCurve:
    """Sample s -> phi(s|rho||sigma) and package it with its states."""
    orders = np.asarray(sorted(orders), dtype=float)
    vals = np.array([phi_sandwich(s, rho, sigma, support_tol) for s in orders])
    curve = PhiCurve(orders, vals, rho, sigma)
    if curve.convexity_defect() > 1e-9:
        raise NumericalInstabilityError(
            f"phi curve failed midpoint convexity by {curve.convexity_defect():.3e}"
        )
    return curve
