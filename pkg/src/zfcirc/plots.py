"""Figure rendering for scan reports (written next to the delimited output)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .scanner import ScanReport


def apply_style() -> None:
    plt.rc("figure", dpi=120, facecolor="white")
    plt.rc("font", size=10)
    plt.rc("axes", grid=True, axisbelow=True)
    plt.rc("grid", alpha=0.3)


def render_scan_figures(report: ScanReport, outdir: str | Path) -> list[Path]:
    """Write the standard scan figures as PNG files, returning their paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    apply_style()
    paths = []

    rows = list(report.rows)
    xs = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(6, 0.35 * len(rows) + 2), 4))
    ax.plot(xs, [r["best_lower"] for r in rows], "v-", color="tab:gray", label="best lower", alpha=0.7)
    ax.plot(xs, [r["best_upper"] for r in rows], "^-", color="tab:gray", label="best upper", alpha=0.7)
    ax.plot(xs, [r["z"] for r in rows], "o", color="tab:blue", label="exact z")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r["spec"] for r in rows], rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("forcing number")
    ax.legend(loc="upper left")
    fig.tight_layout()
    path = outdir / "forcing_vs_bounds.png"
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)

    agg = report.aggregates
    count = max(1, agg["instances"])
    pairs = [
        ("2(k-1) floor", agg["tight_lower_bipartite"] / count),
        ("cycle lower", agg["tight_lower_cycle"] / max(1, agg["applicable_lower_cycle"])),
        ("span upper", agg["tight_upper_span"] / count),
        ("cycle upper", agg["tight_upper_cycle"] / max(1, agg["applicable_upper_cycle"])),
        ("best lower", agg["tight_best_lower"] / count),
        ("best upper", agg["tight_best_upper"] / count),
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([p[0] for p in pairs], [p[1] for p in pairs], color="tab:blue")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("fraction of instances where z meets the bound")
    ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    path = outdir / "bound_tightness.png"
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)
    return paths
