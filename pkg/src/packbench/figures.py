"""Figure rendering for sweep reports.

The sweep CLI writes these alongside the delimited output; the library's
emit_results stays figure-free so downstream tooling can keep consuming
bare CSV/JSON.  All figures are rendered headlessly to PNG files.
"""

from __future__ import annotations

import os
from typing import Optional

from .experiments import TrialRecord


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(
        {
            "figure.dpi": 130,
            "axes.grid": True,
            "grid.alpha": 0.3,
            "font.size": 9,
        }
    )
    return plt


def _cells_for(summary: dict, n: int) -> list[dict]:
    return sorted(
        (c for c in summary["cells"] if c["n"] == n),
        key=lambda c: c["p"],
    )


def render_leftover_figure(records: list[TrialRecord], summary: dict, out_dir: str) -> Optional[str]:
    """Median leftover vs p per host size, against both analytic curves."""
    packed = [r for r in records if r.leftover is not None and not r.failure]
    if not packed:
        return None
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    n_values = sorted({r.n for r in packed})
    cmap = plt.get_cmap("tab10")
    for idx, n in enumerate(n_values):
        color = cmap(idx % 10)
        pts = [(r.p, r.leftover) for r in packed if r.n == n]
        ax.scatter(
            [p for p, _ in pts],
            [lv for _, lv in pts],
            s=8,
            alpha=0.25,
            color=color,
        )
        cells = [c for c in _cells_for(summary, n) if c["median_leftover"] is not None]
        ax.plot(
            [c["p"] for c in cells],
            [c["median_leftover"] for c in cells],
            marker="o",
            color=color,
            label=f"n={n} median",
        )
        bound = [c for c in cells if c["theorem_bound"] is not None]
        if bound:
            ax.plot(
                [c["p"] for c in bound],
                [c["theorem_bound"] for c in bound],
                linestyle="--",
                color=color,
                alpha=0.7,
                label=f"n={n} plateau bound",
            )
        lower = [c for c in cells if c["lower_bound_size"] is not None]
        if lower:
            ax.plot(
                [c["p"] for c in lower],
                [c["lower_bound_size"] for c in lower],
                linestyle=":",
                color=color,
                alpha=0.7,
                label=f"n={n} adversary size",
            )
    ax.set_xscale("log")
    ax.set_yscale("symlog", linthresh=1.0)
    ax.set_xlabel("p")
    ax.set_ylabel("leftover vertices")
    ax.set_title("Leftover vs p")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = os.path.join(out_dir, "leftover_vs_p.png")
    fig.savefig(path)
    plt.close(fig)
    return path


def render_paired_figure(records: list[TrialRecord], out_dir: str) -> Optional[str]:
    """Bootstrap vs single-shot baseline leftover, one point per paired trial."""
    pairs = [
        (r.baseline_leftover, r.leftover)
        for r in records
        if r.baseline_leftover is not None and r.leftover is not None and not r.failure
    ]
    if not pairs:
        return None
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4.6, 4.4))
    xs = [b for b, _ in pairs]
    ys = [v for _, v in pairs]
    top = max(xs + ys + [1])
    ax.plot([0, top], [0, top], color="gray", linewidth=1, label="equal")
    ax.scatter(xs, ys, s=14, alpha=0.6)
    ax.set_xlabel("baseline leftover")
    ax.set_ylabel("bootstrap leftover")
    ax.set_title("Paired leftovers per seed")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = os.path.join(out_dir, "bootstrap_vs_baseline.png")
    fig.savefig(path)
    plt.close(fig)
    return path


def render_adversary_figure(records: list[TrialRecord], out_dir: str) -> Optional[str]:
    """Degraded min degree and deletion load against their certified caps."""
    adv = [r for r in records if r.min_degree_after is not None and not r.failure]
    if not adv:
        return None
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.4, 3.8))
    ps = [r.p for r in adv]
    ax1.scatter(ps, [r.min_degree_after for r in adv], s=12, alpha=0.6, label="after")
    ax1.scatter(
        ps,
        [r.min_degree_before for r in adv],
        s=12,
        alpha=0.4,
        marker="x",
        label="before",
    )
    ax1.plot(
        sorted(set(ps)),
        [
            min(r.degree_floor for r in adv if r.p == p)
            for p in sorted(set(ps))
        ],
        color="red",
        linestyle="--",
        label="(1-eps) n p",
    )
    ax1.set_xlabel("p")
    ax1.set_ylabel("min degree")
    ax1.legend(fontsize=7)
    ax2.scatter(
        ps,
        [r.max_per_vertex_deletions for r in adv],
        s=12,
        alpha=0.6,
        label="max per-vertex deletions",
    )
    ax2.plot(
        sorted(set(ps)),
        [
            min(r.epsilon * r.n * r.p for r in adv if r.p == p)
            for p in sorted(set(ps))
        ],
        color="red",
        linestyle="--",
        label="eps n p cap",
    )
    ax2.set_xlabel("p")
    ax2.set_ylabel("edge deletions")
    ax2.legend(fontsize=7)
    fig.suptitle("Adversarial degradation")
    fig.tight_layout()
    path = os.path.join(out_dir, "adversary_degradation.png")
    fig.savefig(path)
    plt.close(fig)
    return path


def render_sweep_figures(records: list[TrialRecord], summary: dict, out_dir: str) -> list[str]:
    """Render every figure applicable to the records; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = [
        render_leftover_figure(records, summary, out_dir),
        render_paired_figure(records, out_dir),
        render_adversary_figure(records, out_dir),
    ]
    return [p for p in paths if p is not None]
