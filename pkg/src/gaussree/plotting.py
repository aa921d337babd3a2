"""Figure rendering for bound reports and parameter sweeps.

Figures are written to files next to the delimited output; they are a
presentation layer only, the CSV/JSON reports stay the canonical artifact.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_bound_figure(report, path) -> None:
    """Bound versus squeezing, with the closed-form limit when finite."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    rs = [r for r, v in zip(report.r_values, report.bound_at_r) if v is not None]
    vals = [v for v in report.bound_at_r if v is not None]
    ax.plot(rs, vals, "o-", color="tab:blue", label="bound at r")
    closed = report.closed_form
    if closed is not None and math.isfinite(closed):
        ax.axhline(closed, color="tab:red", ls="--", lw=1.0, label="closed form")
    if report.extrapolated is not None:
        ax.axhline(
            report.extrapolated, color="tab:green", ls=":", lw=1.0, label="extrapolated"
        )
    if report.divergent:
        ax.set_title("bound (divergent: no saturation)", fontsize=10)
    else:
        ax.set_title("error-exponent upper bound", fontsize=10)
    ax.set_xlabel("two-mode squeezing r")
    ax.set_ylabel("bound [bits]")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(rows, grid_param: str, path) -> None:
    """Bound versus the swept parameter, one line per r."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    by_r: dict[float, list[tuple[float, float]]] = {}
    closed_pts = []
    for row in rows:
        val = row["channel"].get(grid_param)
        if val is None or row["bound_bits"] is None:
            continue
        by_r.setdefault(row["r"], []).append((val, row["bound_bits"]))
        closed = row["closed_form_bits"]
        if closed is not None and math.isfinite(closed):
            closed_pts.append((val, closed))
    for r in sorted(by_r):
        pts = sorted(by_r[r])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, label=f"r = {r:g}")
    if closed_pts:
        pts = sorted(set(closed_pts))
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            "k--",
            lw=1.0,
            label="closed form",
        )
    ax.set_xlabel(grid_param)
    ax.set_ylabel("bound [bits]")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
