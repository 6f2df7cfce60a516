"""Verification harness: runs the finite-n inequality grids and structural
checks, returning a flat list of BoundReports suitable for CI gating.

Theorem-level inequalities (the rate-ball lower bound and the mass upper
bound) gate the run; asymptotic statements are reported as convergence
diagnostics only and never fail it.
"""

import math
from typing import List, Optional, Sequence

import numpy as np

from .divergences import phi_sandwich
from .sanov import (
    BoundReport,
    ScanResult,
    classical_sanov_prob,
    enumerate_r_set,
    lemma1_check,
    pair_rate,
    theorem1_check,
    theorem2_scan,
)
from .schur import (
    JointOutcomeDistribution,
    enumerate_types,
    enumerate_young,
    joint_projector,
    multiplicity_dim,
    outcome_distribution,
    pinch_types,
    tensor_power,
    type_projector,
    unitary_dim,
)
from .exponents import b_e_hat
from .divergences import d_hat

DEFAULT_LEMMA1_R = (0.05, 0.1, 0.2, 0.5)
DEFAULT_THEOREM1_S = tuple(round(0.1 * k, 2) for k in range(1, 10))
DEFAULT_SANDWICH_S = (0.25, 0.5, 0.75)

# Five diagonal reference states for the rate-ball grid (d = 2).
LEMMA1_RHO_DIAGS = (
    (0.5, 0.5),
    (1.0 / 3.0, 2.0 / 3.0),
    (0.2, 0.8),
    (0.1, 0.9),
    (0.4, 0.6),
)


def _coherent_sigma(p0: float, off: float = 0.2) -> np.ndarray:
    return np.array([[p0, off], [off, 1.0 - p0]], dtype=complex)


# Five (sigma, rho) pairs for the mass upper bound; the last two carry a
# coherent off-diagonal so sigma does not commute with the measurement basis.
def theorem1_pairs():
    return [
        (np.diag([1.0 / 3.0, 2.0 / 3.0]).astype(complex), np.diag([0.5, 0.5])),
        (np.diag([0.2, 0.8]).astype(complex), np.diag([0.3, 0.7])),
        (np.diag([0.6, 0.4]).astype(complex), np.diag([0.25, 0.75])),
        (_coherent_sigma(0.3), np.diag([0.5, 0.5])),
        (_coherent_sigma(0.55), np.diag([0.35, 0.65])),
    ]


def completeness_reports(n: int, d: int) -> List[BoundReport]:
    """Resolution of identity and pairwise orthogonality of the joint projectors."""
    dim = d**n
    total = np.zeros((dim, dim), dtype=complex)
    projs = []
    for young in enumerate_young(n, d):
        for typ in enumerate_types(n, d):
            p = joint_projector(young, typ, d)
            if np.abs(p).max() > 1e-12:
                projs.append(p)
                total += p
    out = [
        BoundReport(
            n=n,
            lhs=float(np.abs(total - np.eye(dim)).max()),
            rhs=0.0,
            context=f"completeness d={d} n={n}",
        )
    ]
    worst = 0.0
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            worst = max(worst, float(np.abs(projs[i] @ projs[j]).max()))
    out.append(
        BoundReport(n=n, lhs=worst, rhs=0.0, context=f"orthogonality d={d} n={n}")
    )
    return out


def norm_factor_reports(sigma_diag: np.ndarray, n: int) -> List[BoundReport]:
    """Operator norm of sigma^(x)n restricted to each type sector equals the
    exact product of letter probabilities (relative error bound)."""
    d = len(sigma_diag)
    sig = np.diag(np.asarray(sigma_diag, dtype=float)).astype(complex)
    big = tensor_power(sig, n)
    out = []
    for typ in enumerate_types(n, d):
        proj = type_projector(typ, d)
        norm = float(np.linalg.norm(big @ proj, ord=2))
        expected = float(np.prod(np.asarray(sigma_diag, dtype=float) ** np.array(typ.counts)))
        scale = max(expected, 1e-300)
        out.append(
            BoundReport(
                n=n,
                lhs=abs(norm - expected) / scale,
                rhs=0.0,
                context=f"type-sector norm n={n} type={typ.counts}",
                tolerance=1e-12,
            )
        )
    return out


def lemma1_grid(
    n_list: Sequence[int] = range(2, 8),
    r_values: Sequence[float] = DEFAULT_LEMMA1_R,
    rho_diags=LEMMA1_RHO_DIAGS,
    bound_scale: float = 1.0,
) -> List[BoundReport]:
    """Rate-ball lower bound over the full diagonal-state grid (d=2)."""
    out = []
    for diag in rho_diags:
        rho = np.diag(diag).astype(complex)
        for n in n_list:
            dist = outcome_distribution(rho, n)
            for r in r_values:
                out.append(lemma1_check(rho, r, n, dist=dist, bound_scale=bound_scale))
    return out


def theorem1_grid(
    n_list: Sequence[int] = range(2, 7),
    s_values: Sequence[float] = DEFAULT_THEOREM1_S,
    pairs=None,
    bound_scale: float = 1.0,
) -> List[BoundReport]:
    """Per-outcome mass upper bound over all outcome pairs, s grid, and state pairs."""
    if pairs is None:
        pairs = theorem1_pairs()
    out = []
    for sigma, rho in pairs:
        for n in n_list:
            dist = outcome_distribution(sigma, n)
            for pair in enumerate_r_set(n, sigma.shape[0]):
                for s in s_values:
                    out.append(
                        theorem1_check(
                            sigma, rho, pair, s, n, dist=dist, bound_scale=bound_scale
                        )
                    )
    return out


def pinching_sandwich_reports(
    sigma,
    rho,
    n_list: Sequence[int] = range(2, 7),
    s_values: Sequence[float] = DEFAULT_SANDWICH_S,
) -> List[BoundReport]:
    """Two-sided comparison of phi on the pinched versus unpinched tensor power.

    With A = sigma^(x)n, P = type-pinched A, and B = rho^(x)n:
        -phi(1-s | P||B) + (1-s)(d-1) log(n+1) >= -phi(1-s | A||B) >= -phi(1-s | P||B).
    """
    sig = np.asarray(sigma.mat if hasattr(sigma, "mat") else sigma, dtype=complex)
    rh = np.asarray(rho.mat if hasattr(rho, "mat") else rho, dtype=complex)
    d = sig.shape[0]
    out = []
    for n in n_list:
        big_s = tensor_power(sig, n)
        big_r = tensor_power(rh, n)
        pinched = pinch_types(big_s, n, d)
        for s in s_values:
            phi_pinched = phi_sandwich(1.0 - s, pinched, big_r)
            phi_plain = phi_sandwich(1.0 - s, big_s, big_r)
            correction = (1.0 - s) * (d - 1) * math.log(n + 1)
            out.append(
                BoundReport(
                    n=n,
                    lhs=-phi_plain,
                    rhs=-phi_pinched + correction,
                    context=f"pinching upper n={n} s={s}",
                )
            )
            out.append(
                BoundReport(
                    n=n,
                    lhs=-phi_pinched,
                    rhs=-phi_plain,
                    context=f"pinching lower n={n} s={s}",
                )
            )
    return out


def pinched_phi_trend(sigma, rho, s: float, n_list: Sequence[int] = range(2, 7)):
    """Per-letter phi of the pinched tensor power against the single-copy value.

    Returns (values, target); a diagnostic sequence, not a gated check.
    """
    sig = np.asarray(sigma.mat if hasattr(sigma, "mat") else sigma, dtype=complex)
    rh = np.asarray(rho.mat if hasattr(rho, "mat") else rho, dtype=complex)
    d = sig.shape[0]
    target = phi_sandwich(1.0 - s, sig, rh)
    values = []
    for n in n_list:
        pinched = pinch_types(tensor_power(sig, n), n, d)
        values.append(phi_sandwich(1.0 - s, pinched, tensor_power(rh, n)) / n)
    return values, target


def dimension_reports(n_max: int = 12, d_max: int = 4) -> List[BoundReport]:
    """Exact integer dimension identities and polynomial counting bounds."""
    out = []
    for d in range(2, d_max + 1):
        for n in range(1, n_max + 1):
            youngs = enumerate_young(n, d)
            total = sum(multiplicity_dim(y) * unitary_dim(y, d) for y in youngs)
            out.append(
                BoundReport(
                    n=n,
                    lhs=float(abs(total - d**n)),
                    rhs=0.0,
                    context=f"schur dimension sum d={d} n={n}",
                    tolerance=0.0,
                )
            )
            # Counting bounds: |Y_d^n| <= (n+1)^(d-1), dim V_lambda <= n^|lambda|/lambda!
            out.append(
                BoundReport(
                    n=n,
                    lhs=float(len(youngs)),
                    rhs=float((n + 1) ** (d - 1)),
                    context=f"young count bound d={d} n={n}",
                    tolerance=0.0,
                )
            )
            for y in youngs:
                num = float(n) ** n
                denom = 1.0
                for part in y.parts:
                    denom *= math.factorial(part)
                out.append(
                    BoundReport(
                        n=n,
                        lhs=float(multiplicity_dim(y)),
                        rhs=num / denom,
                        context=f"multiplicity bound d={d} n={n} shape={y.parts}",
                    )
                )
    return out


def corollary_search(rho, sigma, fraction: float = 0.9) -> BoundReport:
    """Search a logarithmic r grid for an exponent at least fraction * d_hat."""
    target = fraction * d_hat(rho, sigma)
    best = -math.inf
    for r in np.geomspace(1e-6, 1e-1, 40):
        val, _ = b_e_hat(float(r), rho, sigma)
        best = max(best, val)
        if best >= target:
            break
    return BoundReport(
        n=0,
        lhs=target,
        rhs=best,
        context=f"achievability search fraction={fraction}",
        tolerance=1e-9,
    )


def classical_consistency_reports(n_list: Sequence[int] = range(2, 7)) -> List[BoundReport]:
    """Type-probability product formula sums to one for diagonal states."""
    out = []
    for diag in ((0.5, 0.5), (1.0 / 3.0, 2.0 / 3.0), (0.2, 0.8)):
        sigma = np.diag(diag).astype(complex)
        for n in n_list:
            total = sum(
                classical_sanov_prob(sigma, typ) for typ in enumerate_types(n, 2)
            )
            out.append(
                BoundReport(
                    n=n,
                    lhs=abs(total - 1.0),
                    rhs=0.0,
                    context=f"type-law normalization diag={diag} n={n}",
                    tolerance=1e-12,
                )
            )
    return out


def run_verification(
    n_max: int = 6,
    d: int = 2,
    bound_scale: float = 1.0,
    quick: bool = False,
) -> List[BoundReport]:
    """Run the full harness; returns every BoundReport in deterministic order.

    bound_scale < 1 deliberately corrupts the proven bound constants; it exists
    so the pass/fail wiring itself can be exercised end to end.
    """
    reports: List[BoundReport] = []
    comp_ns = range(2, min(n_max, 4 if quick else 7) + 1)
    for n in comp_ns:
        reports.extend(completeness_reports(n, d))
    if d == 2:
        for n in range(2, min(n_max, 6) + 1):
            reports.extend(norm_factor_reports(np.array([1.0 / 3.0, 2.0 / 3.0]), n))
        lemma_ns = range(2, min(n_max + 1, 5) if quick else min(n_max, 7) + 1)
        reports.extend(lemma1_grid(n_list=lemma_ns, bound_scale=bound_scale))
        thm_ns = range(2, min(n_max + 1, 5) if quick else min(n_max, 6) + 1)
        pairs = theorem1_pairs()[:2] if quick else None
        reports.extend(theorem1_grid(n_list=thm_ns, pairs=pairs, bound_scale=bound_scale))
        reports.extend(
            pinching_sandwich_reports(
                np.diag([1.0 / 3.0, 2.0 / 3.0]),
                np.diag([0.5, 0.5]),
                n_list=range(2, min(n_max, 6) + 1),
            )
        )
        reports.extend(
            pinching_sandwich_reports(
                _coherent_sigma(0.3),
                np.diag([0.4, 0.6]),
                n_list=range(2, min(n_max, 6) + 1),
            )
        )
    reports.extend(dimension_reports(n_max=8 if quick else 12, d_max=3 if quick else 4))
    reports.extend(classical_consistency_reports())
    reports.append(
        corollary_search(np.diag([0.3, 0.7]).astype(complex), np.diag([0.6, 0.4]).astype(complex))
    )
    return reports


def summarize(reports: Sequence[BoundReport]) -> dict:
    return {
        "total": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "vacuous": sum(1 for r in reports if r.vacuous),
    }
