"""SVG rendering of CEP clouds."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "idcep"


def cep_scatter_svg(result, path, max_lines=120, title=None):
    """Scatter of per-subject (ds, dt) with fitted and marginal-effect lines.

    Gray lines show per-iteration fits (thinned to ``max_lines``); the solid
    line is the posterior-mean fit; dashed lines mark the marginal effects on
    each endpoint; the crosshair marks the origin.
    """
    s = result.summary
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    ax.scatter(result.ds, result.dt, s=6, alpha=0.35, color="#1f4e79", edgecolors="none")
    x0, x1 = float(min(result.ds.min(), 0)), float(max(result.ds.max(), 0))
    pad = 0.05 * (x1 - x0 + 1e-9)
    grid = [x0 - pad, x1 + pad]
    lines = result.lines
    if len(lines) > 1:
        step = max(1, len(lines) // max_lines)
        for g0, g1 in lines[::step]:
            ax.plot(grid, [g0 + g1 * g for g in grid], color="gray", alpha=0.12, lw=0.6)
    ax.plot(grid, [s["g0_mean"] + s["g1_mean"] * g for g in grid], color="black", lw=1.6)
    ax.axhline(0.0, color="black", lw=0.5)
    ax.axvline(0.0, color="black", lw=0.5)
    ax.axvline(s["mean_ds"], color="red", ls="--", lw=1.0)
    ax.axhline(s["mean_dt"], color="red", ls="--", lw=1.0)
    ax.set_xlabel("effect on intermediate endpoint (log cumulative-hazard ratio)")
    ax.set_ylabel("effect on terminal-event survival")
    if title:
        ax.set_title(title)
    ax.annotate(f"intercept {s['g0_mean']:.3f} ({s['g0_lo']:.3f}, {s['g0_hi']:.3f})\n"
                f"slope {s['g1_mean']:.3f} ({s['g1_lo']:.3f}, {s['g1_hi']:.3f})",
                xy=(0.02, 0.98), xycoords="axes fraction", va="top", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
