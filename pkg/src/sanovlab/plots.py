"""Figure rendering for CLI reports: each delimited output gets a matching
PNG rendered next to it."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finite(xs, ys):
    pts = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y)]
    if not pts:
        return [], []
    return [p[0] for p in pts], [p[1] for p in pts]


def render_exponent_curve(curve, path) -> None:
    """Plot the error-exponent curve r -> B(r) with its flat-zero threshold."""
    fig, ax = plt.subplots(figsize=(6, 4))
    xs, ys = _finite(curve.r_grid, curve.b_values)
    ax.plot(xs, ys, marker=".", lw=1.2, label="error exponent")
    ax.axhline(curve.d_hat_value, color="gray", ls="--", lw=0.8, label="small-r limit")
    ax.axvline(curve.d_sigma_rho, color="tab:red", ls=":", lw=0.8, label="zero threshold")
    ax.set_xlabel("rate threshold r")
    ax.set_ylabel("exponent")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_phi_curve(curve, path) -> None:
    """Plot the divergence generator over its order grid."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(curve.orders, curve.values, marker=".", lw=1.2)
    ax.set_xlabel("order t")
    ax.set_ylabel("phi(t)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_distribution(dist, path) -> None:
    """Bar chart of the joint outcome law in canonical order."""
    items = dist.canonical_items()
    labels = [f"{list(y)}|{list(t)}" for (y, t), _ in items]
    probs = [p for _, p in items]
    fig, ax = plt.subplots(figsize=(max(6, 0.35 * len(items)), 4))
    ax.bar(range(len(probs)), probs)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_ylabel("probability")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_scan(scan, path) -> None:
    """Plot finite-n exponents of the rate-ball mass against the target."""
    fig, ax = plt.subplots(figsize=(6, 4))
    xs, ys = _finite(scan.n_list, scan.exponents)
    ax.plot(xs, ys, marker="o", lw=1.2, label="finite-n exponent")
    if math.isfinite(scan.limit_target):
        ax.axhline(scan.limit_target, color="gray", ls="--", lw=0.8, label="limit target")
    ax.set_xlabel("n")
    ax.set_ylabel("exponent")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report_summary(reports, path) -> None:
    """Slack histogram for a batch of checked bounds."""
    slacks = [r.slack for r in reports if math.isfinite(r.lhs) and math.isfinite(r.rhs)]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(slacks, bins=40)
    ax.set_xlabel("bound slack (rhs - lhs)")
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
