"""Command-line front end.

Subcommands: divergence, exponents, measure, verify, scan, sample.
Exit codes: 0 success, 1 validation/config error, 2 failed theorem-level check.
Report paths get a PNG figure rendered alongside the delimited output.
"""

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import harness, io, plots
from .divergences import d_hat, phi_curve, phi_sandwich
from .errors import (
    DomainError,
    NumericalInstabilityError,
    ResourceBudgetError,
    SupportViolationError,
    ValidationError,
)
from .exponents import exponent_curve, legendre_dual_max, solve_s_of_r
from .sanov import theorem2_scan
from .schur import MAX_N_OPERATOR, outcome_distribution, sample_outcomes
from .spectral import relative_entropy

_USER_ERRORS = (
    ValidationError,
    DomainError,
    ResourceBudgetError,
    SupportViolationError,
    NumericalInstabilityError,
    OSError,
)


def _fail(messages) -> "NoReturn":
    if isinstance(messages, str):
        messages = [messages]
    for m in messages:
        click.echo(f"error: {m}", err=True)
    sys.exit(1)


def _parse_grid(text: str, name: str):
    """Parse start:stop:count into an ascending float grid."""
    problems = []
    parts = text.split(":")
    if len(parts) != 3:
        problems.append(f"{name} must be start:stop:count, got {text!r}")
    else:
        try:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
            if count < 1:
                problems.append(f"{name} count must be >= 1")
            elif count > 1 and stop <= start:
                problems.append(f"{name} must be ascending (stop > start)")
        except ValueError:
            problems.append(f"{name} has non-numeric fields: {text!r}")
    if problems:
        _fail(problems)
    return np.linspace(start, stop, count)


def _parse_n(text: str):
    """Parse an integer or A..B range into a list of n values."""
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        try:
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            _fail(f"--n range must be A..B with integers, got {text!r}")
        if lo > hi:
            _fail(f"--n range is descending: {text!r}")
        values = list(range(lo, hi + 1))
    else:
        try:
            values = [int(text)]
        except ValueError:
            _fail(f"--n must be an integer or A..B, got {text!r}")
    for n in values:
        if n < 1:
            _fail(f"--n values must be positive, got {n}")
    return values


def _load_state(path, name: str, budget_errors):
    if path is None:
        budget_errors.append(f"--{name} is required for this command")
        return None
    try:
        return io.load_density(path)
    except _USER_ERRORS as exc:
        budget_errors.append(str(exc))
        return None


def _check_budget(n_values, d: int, budget: int, errors):
    for n in n_values:
        if n > budget:
            errors.append(f"n={n} exceeds budget {budget}")
        if d**n > 4096:
            errors.append(f"d^n = {d**n} exceeds the tensor budget 4096 at n={n}")


def _out_paths(out, default_stem: str, fmt: str):
    """Resolve the delimited-output path and its sibling figure path."""
    path = Path(out) if out else Path(f"{default_stem}.{fmt}")
    return path, path.with_suffix(".png")


@click.group()
def main():
    """Numerics for joint spectrum-and-type measurements and their exponents."""


@main.command()
@click.option("--sigma", "sigma_path", type=click.Path(), required=False)
@click.option("--rho", "rho_path", type=click.Path(), required=False)
@click.option("--s-grid", default="0.05:0.95:19", show_default=True)
@click.option("--support-tol", default=1e-12, show_default=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def divergence(sigma_path, rho_path, s_grid, support_tol, out, fmt):
    """Divergence panel: relative entropy, slope-limit divergence, phi curve."""
    errors = []
    sigma = _load_state(sigma_path, "sigma", errors)
    rho = _load_state(rho_path, "rho", errors)
    if errors:
        _fail(errors)
    grid = _parse_grid(s_grid, "--s-grid")
    if np.any(grid <= 0) or np.any(grid >= 1):
        _fail("--s-grid must lie inside (0,1)")
    try:
        curve = phi_curve(rho, sigma, grid, support_tol=support_tol)
        panel = {
            "relative_entropy": relative_entropy(rho, sigma, support_tol=support_tol),
            "slope_divergence": d_hat(rho, sigma, support_tol=support_tol),
            "phi": {f"{s:.12g}": v for s, v in zip(curve.orders, curve.values)},
        }
    except _USER_ERRORS as exc:
        _fail(str(exc))
    panel = {
        k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
        for k, v in panel.items()
    }
    path, fig_path = _out_paths(out, "divergence", fmt)
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(panel, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write("# sanovlab divergence panel v1: s,phi\n")
            fh.write("s,phi\n")
            for s, v in zip(curve.orders, curve.values):
                fh.write(f"{s:.12g},{v:.12g}\n")
    plots.render_phi_curve(curve, fig_path)
    click.echo(f"wrote {path} and {fig_path}")


@main.command()
@click.option("--sigma", "sigma_path", type=click.Path(), required=False)
@click.option("--rho", "rho_path", type=click.Path(), required=False)
@click.option("--r-grid", default="0.01:0.5:50", show_default=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
def exponents(sigma_path, rho_path, r_grid, out, fmt):
    """Error-exponent curve r -> B(r) with optimizing parameters."""
    errors = []
    sigma = _load_state(sigma_path, "sigma", errors)
    rho = _load_state(rho_path, "rho", errors)
    if errors:
        _fail(errors)
    grid = _parse_grid(r_grid, "--r-grid")
    if np.any(grid <= 0):
        _fail("--r-grid must be strictly positive")
    try:
        curve = exponent_curve(rho, sigma, grid)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    path, fig_path = _out_paths(out, "exponents", fmt)
    if fmt == "csv":
        curve.write_csv(path, sidecar_path=path.with_suffix(".meta.json"))
    else:
        payload = {
            "d_hat": "inf" if math.isinf(curve.d_hat_value) else curve.d_hat_value,
            "d_sigma_rho": "inf" if math.isinf(curve.d_sigma_rho) else curve.d_sigma_rho,
            "points": [
                {"r": float(r), "b_e_hat": ("inf" if math.isinf(b) else float(b)),
                 "s_opt": s}
                for r, b, s in zip(curve.r_grid, curve.b_values, curve.s_opt)
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    plots.render_exponent_curve(curve, fig_path)
    click.echo(f"wrote {path} and {fig_path}")


@main.command()
@click.option("--sigma", "sigma_path", type=click.Path(), required=False)
@click.option("--n", "n_text", default="2", show_default=True)
@click.option("--budget", default=MAX_N_OPERATOR, show_default=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def measure(sigma_path, n_text, budget, out, fmt):
    """Exact joint outcome distribution of sigma^(x)n."""
    errors = []
    sigma = _load_state(sigma_path, "sigma", errors)
    n_values = _parse_n(n_text)
    if len(n_values) != 1:
        errors.append("measure takes a single --n, not a range")
    if sigma is not None:
        _check_budget(n_values, sigma.dim, budget, errors)
    if errors:
        _fail(errors)
    n = n_values[0]
    try:
        dist = outcome_distribution(sigma, n)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    path, fig_path = _out_paths(out, f"measure_n{n}", fmt)
    if fmt == "json":
        io.distribution_to_json(dist, path)
    else:
        with open(path, "w") as fh:
            fh.write("# sanovlab outcome distribution v1: young,type,prob\n")
            fh.write("young,type,prob\n")
            for (young, typ), p in dist.canonical_items():
                fh.write(f"{' '.join(map(str, young))},{' '.join(map(str, typ))},{p:.12g}\n")
    plots.render_distribution(dist, fig_path)
    click.echo(f"wrote {path} and {fig_path}")


@main.command()
@click.option("--n", "n_text", default="2..6", show_default=True)
@click.option("--d", default=2, show_default=True)
@click.option("--budget", default=MAX_N_OPERATOR, show_default=True)
@click.option("--quick/--full", default=False, show_default=True)
@click.option("--corrupt-bound", default=1.0, show_default=True,
              help="Test hook: scales proven bound constants; values != 1 corrupt them.")
@click.option("--out", default="verify_report.jsonl", show_default=True)
def verify(n_text, d, budget, quick, corrupt_bound, out):
    """Run the verification harness; exit 2 if any proven bound fails."""
    errors = []
    n_values = _parse_n(n_text)
    if d < 2:
        errors.append("--d must be >= 2")
    _check_budget(n_values, d, budget, errors)
    if errors:
        _fail(errors)
    try:
        reports = harness.run_verification(
            n_max=max(n_values), d=d, bound_scale=corrupt_bound, quick=quick
        )
    except _USER_ERRORS as exc:
        _fail(str(exc))
    summary = io.write_reports(reports, out)
    fig_path = Path(out).with_suffix(".png")
    plots.render_report_summary(reports, fig_path)
    click.echo(json.dumps({"summary": summary}, sort_keys=True))
    click.echo(f"wrote {out} and {fig_path}")
    if summary["passed"] < summary["total"]:
        sys.exit(2)


@main.command()
@click.option("--sigma", "sigma_path", type=click.Path(), required=False)
@click.option("--rho", "rho_path", type=click.Path(), required=False)
@click.option("--r", "r_value", default=0.05, show_default=True)
@click.option("--n", "n_text", default="2..7", show_default=True)
@click.option("--budget", default=MAX_N_OPERATOR, show_default=True)
@click.option("--out", default=None)
def scan(sigma_path, rho_path, r_value, n_text, budget, out):
    """Finite-n exponents of the rate-ball mass with their limit target."""
    errors = []
    sigma = _load_state(sigma_path, "sigma", errors)
    rho = _load_state(rho_path, "rho", errors)
    n_values = _parse_n(n_text)
    if r_value <= 0:
        errors.append("--r must be positive")
    if sigma is not None:
        _check_budget(n_values, sigma.dim, budget, errors)
    if errors:
        _fail(errors)
    try:
        result = theorem2_scan(sigma, rho, r_value, n_values)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    path, fig_path = _out_paths(out, "scan", "csv")
    result.write_csv(path)
    plots.render_scan(result, fig_path)
    click.echo(
        json.dumps(
            {
                "final_gap": ("inf" if math.isinf(result.final_gap) else result.final_gap),
                "trend": result.monotonicity_summary(),
            },
            sort_keys=True,
        )
    )
    click.echo(f"wrote {path} and {fig_path}")
    failed = [rep for rep in result.floor_reports if not rep.passed]
    if failed:
        sys.exit(2)


@main.command()
@click.option("--sigma", "sigma_path", type=click.Path(), required=False)
@click.option("--n", "n_text", default="2", show_default=True)
@click.option("--count", default=1000, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--budget", default=MAX_N_OPERATOR, show_default=True)
@click.option("--out", default=None)
def sample(sigma_path, n_text, count, seed, budget, out):
    """Draw outcome samples from the exact joint distribution."""
    errors = []
    sigma = _load_state(sigma_path, "sigma", errors)
    n_values = _parse_n(n_text)
    if len(n_values) != 1:
        errors.append("sample takes a single --n, not a range")
    if seed is None:
        errors.append("--seed is required for sample")
    if count < 1:
        errors.append("--count must be >= 1")
    if sigma is not None:
        _check_budget(n_values, sigma.dim, budget, errors)
    if errors:
        _fail(errors)
    n = n_values[0]
    try:
        dist = outcome_distribution(sigma, n)
        draws = sample_outcomes(dist, count, seed)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    path = Path(out) if out else Path(f"samples_n{n}.csv")
    with open(path, "w") as fh:
        fh.write("# sanovlab outcome samples v1: young,type\n")
        fh.write("young,type\n")
        for young, typ in draws:
            fh.write(f"{' '.join(map(str, young))},{' '.join(map(str, typ))}\n")
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
