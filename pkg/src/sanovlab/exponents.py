"""Error-exponent calculus.

B_e(r) = sup_{s in (0,1)} (-(1-s) r - phi(1-s|sigma||rho)) / s is computed by
solving the stationarity equation s phi'(s) = r + phi(s) for the optimizer
s(r), then polishing with golden-section search and certifying against a
coarse grid.  The convention throughout: the pair (rho, sigma) enters the
inner functional as phi(1-s | sigma || rho).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .divergences import d_hat, phi_sandwich
from .errors import DomainError, NumericalInstabilityError
from .spectral import relative_entropy

_S_MIN = 1e-6
_S_MAX = 1.0 - 1e-6
_FD_STEP = 1e-5
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _phi(s: float, rho, sigma) -> float:
    return phi_sandwich(1.0 - s, sigma, rho)


def _phi_deriv(s: float, rho, sigma, h: float = _FD_STEP) -> float:
    lo = max(s - h, _S_MIN / 2)
    hi = min(s + h, _S_MAX)
    return (_phi(hi, rho, sigma) - _phi(lo, rho, sigma)) / (hi - lo)


def _objective(s: float, r: float, rho, sigma) -> float:
    return (-(1.0 - s) * r - _phi(s, rho, sigma)) / s


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10):
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    x = (a + b) / 2
    return x, f(x)


def solve_s_of_r(r: float, rho, sigma, r_max: float = 50.0) -> float:
    """Solve s * d/ds phi(1-s|sigma||rho) = r + phi(1-s|sigma||rho) for s.

    Defined for 0 < r < D(sigma||rho); when that relative entropy is infinite
    the domain is all of (0, r_max].  The residual is monotone in s by
    convexity of phi, so a sign scan plus Brent's method is certifiable.
    """
    if r <= 0:
        raise DomainError(f"r={r} must be positive")
    d_sr = relative_entropy(sigma, rho)
    if math.isfinite(d_sr) and r >= d_sr:
        raise DomainError(f"r={r} is not below D(sigma||rho)={d_sr}")
    if r > r_max:
        raise DomainError(f"r={r} exceeds configured r_max={r_max}")

    def resid(s):
        return s * _phi_deriv(s, rho, sigma) - _phi(s, rho, sigma) - r

    grid = np.concatenate(
        [np.geomspace(_S_MIN * 10, 0.1, 12), np.linspace(0.15, _S_MAX, 18)]
    )
    signs = [resid(s) for s in grid]
    for (s0, f0), (s1, f1) in zip(zip(grid, signs), zip(grid[1:], signs[1:])):
        if f0 <= 0 <= f1:
            s_star = float(brentq(resid, s0, s1, xtol=1e-13, rtol=1e-14))
            res = resid(s_star)
            if abs(res) > 1e-8:
                raise NumericalInstabilityError(
                    f"stationarity residual {res:.3e} above tolerance at s={s_star}"
                )
            return s_star
    raise NumericalInstabilityError(
        "no sign change found for the stationarity equation; "
        f"residual signs along the scan: {[math.copysign(1, f) for f in signs]}"
    )


def b_e_hat(r: float, rho, sigma, r_max: float = 50.0):
    """The exponent sup_{s in (0,1)} (-(1-s)r - phi(1-s|sigma||rho))/s.

    Returns ``(value, s_star)``.  For r >= D(sigma||rho) the supremum is the
    boundary value 0, returned exactly with ``s_star = None``.  Otherwise the
    stationary point seeds a golden-section polish and a 99-point grid
    certifies the result.
    """
    if r <= 0:
        raise DomainError(f"r={r} must be positive")
    d_sr = relative_entropy(sigma, rho)
    if math.isfinite(d_sr) and r >= d_sr:
        return 0.0, None

    try:
        seed = solve_s_of_r(r, rho, sigma, r_max=r_max)
    except NumericalInstabilityError:
        seed = None

    f = lambda s: _objective(s, r, rho, sigma)
    if seed is not None:
        lo = max(_S_MIN, seed - 0.05)
        hi = min(_S_MAX, seed + 0.05)
    else:
        lo, hi = _S_MIN, _S_MAX
    s_star, value = _golden_max(f, lo, hi)
    if seed is None and s_star <= 1e-5 and f(s_star) > f(10 * s_star):
        # No stationary point and the objective still climbs toward s -> 0:
        # the supremum diverges (degenerate phi curve, e.g. pure sigma).
        return math.inf, 0.0

    cert = max(f(s) for s in np.linspace(0.01, 0.99, 99))
    if cert > value + 1e-8:
        # The golden bracket missed the optimum; fall back to the full interval.
        s_star, value = _golden_max(f, _S_MIN, _S_MAX)
        if cert > value + 1e-8:
            raise NumericalInstabilityError(
                f"grid certificate {cert} exceeds optimized value {value}"
            )
    return float(max(value, 0.0) if abs(value) < 1e-12 else value), float(s_star)


def legendre_dual_max(r0: float, rho, sigma, r_max: float = 50.0):
    """Maximize -(1-s(r0)) r + s(r0) ((1-s(r)) r + phi(1-s(r)|sigma||rho))/s(r).

    By the Legendre-dual identity the maximum over r in (0, D(sigma||rho))
    equals phi(1-s(r0)|sigma||rho) and is attained at r = r0.
    Returns ``(max_value, argmax_r)``.
    """
    d_sr = relative_entropy(sigma, rho)
    hi = min(d_sr, r_max) if math.isfinite(d_sr) else r_max
    if not 0 < r0 < hi:
        raise DomainError(f"r0={r0} outside (0, {hi})")
    s0 = solve_s_of_r(r0, rho, sigma, r_max=r_max)

    def obj(r):
        val, _ = b_e_hat(r, rho, sigma, r_max=r_max)
        return -(1.0 - s0) * r - s0 * val

    eps = min(1e-4, r0 / 10)
    argmax, best = _golden_max(obj, eps, hi - eps, tol=1e-7)
    return float(best), float(argmax)


@dataclass
class ExponentCurve:
    """Sampled r -> B_e(r) with the optimizing s at each grid point."""

    r_grid: np.ndarray
    b_values: np.ndarray
    s_opt: list  # None marks the r >= D(sigma||rho) boundary regime
    d_hat_value: float
    d_sigma_rho: float  # may be +inf

    def validate(self):
        b = self.b_values
        if np.any(np.diff(b) > 1e-9):
            raise NumericalInstabilityError("exponent curve is not nonincreasing")
        if np.any(b < -1e-12):
            raise NumericalInstabilityError("negative exponent value")
        if np.any(b > self.d_hat_value + 1e-6):
            raise NumericalInstabilityError("exponent exceeds its d_hat ceiling")
        if math.isfinite(self.d_sigma_rho):
            tail = self.r_grid >= self.d_sigma_rho
            if np.any(b[tail] != 0.0):
                raise NumericalInstabilityError("nonzero exponent beyond D(sigma||rho)")

    def write_csv(self, path, sidecar_path=None):
        """CSV with header r,b_e_hat,s_opt plus a JSON sidecar of the scalars."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            fh.write("# sanovlab exponent curve v1: r,b_e_hat,s_opt\n")
            w.writerow(["r", "b_e_hat", "s_opt"])
            for r, b, s in zip(self.r_grid, self.b_values, self.s_opt):
                w.writerow([f"{r:.12g}", f"{b:.12g}", "" if s is None else f"{s:.12g}"])
        if sidecar_path is not None:
            meta = {
                "d_hat": self.d_hat_value,
                "d_sigma_rho": "inf" if math.isinf(self.d_sigma_rho) else self.d_sigma_rho,
            }
            with open(sidecar_path, "w") as fh:
                json.dump(meta, fh, indent=2, sort_keys=True)
                fh.write("\n")


def exponent_curve(rho, sigma, r_grid: Sequence[float], r_max: float = 50.0) -> ExponentCurve:
    """Batch b_e_hat over an ascending positive grid and attach the scalars."""
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size == 0 or np.any(r_grid <= 0) or np.any(np.diff(r_grid) <= 0):
        raise DomainError("r grid must be positive and strictly ascending")
    values, s_opts = [], []
    for r in r_grid:
        val, s = b_e_hat(r, rho, sigma, r_max=r_max)
        values.append(val)
        s_opts.append(s)
    curve = ExponentCurve(
        r_grid=r_grid,
        b_values=np.asarray(values),
        s_opt=s_opts,
        d_hat_value=d_hat(rho, sigma),
        d_sigma_rho=relative_entropy(sigma, rho),
    )
    curve.validate()
    return curve
