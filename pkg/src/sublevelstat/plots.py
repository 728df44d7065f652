"""Figure rendering for the report path.

Figures are written next to the delimited outputs with matplotlib (Agg
backend).  Output bytes must be reproducible run to run, so SVG ids are
salted with a fixed string and date metadata is suppressed.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sublevelstat"

import matplotlib.pyplot as plt  # noqa: E402

from .persistence import INF, PersistenceDiagram  # noqa: E402

_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red")


def _savefig(fig, path) -> None:
    path = str(path)
    metadata = {"Date": None} if path.endswith(".svg") else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def save_diagram_figure(diagram: PersistenceDiagram, path, title: str = None) -> None:
    """Birth/death scatter with the diagonal; essential classes sit on the
    top border at a finite display height."""
    finite_vals = [p.birth for p in diagram.pairs]
    finite_vals += [p.death for p in diagram.pairs if not p.essential]
    lo = min(finite_vals, default=0.0)
    hi = max(finite_vals, default=1.0)
    span = (hi - lo) or 1.0
    lo -= 0.05 * span
    top = hi + 0.15 * span

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot([lo, top], [lo, top], color="0.6", lw=1, zorder=1)
    for color, k in zip(_COLORS, diagram.degrees()):
        pts = diagram.points(k, expand=False)
        births = [b for b, _ in pts]
        deaths = [d if d != INF else top for _, d in pts]
        ess = [d == INF for _, d in pts]
        ax.scatter(
            [b for b, e in zip(births, ess) if not e],
            [d for d, e in zip(deaths, ess) if not e],
            s=28, color=color, label=f"degree {k}", zorder=3,
        )
        ax.scatter(
            [b for b, e in zip(births, ess) if e],
            [d for d, e in zip(deaths, ess) if e],
            s=48, color=color, marker="^", zorder=3,
        )
    if any(p.essential for p in diagram.pairs):
        ax.axhline(top, color="0.8", lw=0.8, ls="--", zorder=1)
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    if title:
        ax.set_title(title)
    if diagram.pairs:
        ax.legend(loc="lower right", fontsize=9)
    ax.set_xlim(lo, top + 0.02 * span)
    ax.set_ylim(lo, top + 0.02 * span)
    fig.tight_layout()
    _savefig(fig, path)


def save_convergence_figure(summary_rows: list[dict], path) -> None:
    """Mean sup-norm error and mean bottleneck distance against n, log-log,
    with the theoretical C0 * psi_n reference."""
    ns = [row["n"] for row in summary_rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(ns, [r["mean_sup_norm_error"] for r in summary_rows],
              "o-", color="tab:blue", label="mean sup-norm error")
    ax.loglog(ns, [r["mean_bottleneck_max"] for r in summary_rows],
              "s-", color="tab:orange", label="mean bottleneck distance")
    ax.loglog(ns, [r["c0_psi"] for r in summary_rows],
              "--", color="0.4", label="C0 psi_n")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("error")
    ax.legend(fontsize=9)
    ax.grid(True, which="both", ls=":", lw=0.5)
    fig.tight_layout()
    _savefig(fig, path)
