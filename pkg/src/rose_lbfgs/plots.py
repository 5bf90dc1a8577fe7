"""Figure rendering for benchmark reports (file output only)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import CellOutcome, ProfileCurve, _cell_slug


def save_profile_plot(curves: list[ProfileCurve], path: str | Path) -> None:
    """Render performance-profile step curves to an image file."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for curve in curves:
        taus = [p[0] for p in curve.points]
        rhos = [p[1] for p in curve.points]
        ax.step(taus, rhos, where="post", label=curve.method)
    ax.set_xlabel("performance ratio tau")
    ax.set_ylabel("fraction of problems")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_convergence_plot(outcomes: list[CellOutcome], path: str | Path) -> None:
    """Render gradient-norm histories of every traced cell on a log scale."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    tiny = 1e-300
    for outcome in outcomes:
        if not outcome.records:
            continue
        ks = [r.k for r in outcome.records]
        norms = [max(r.grad_norm, tiny) for r in outcome.records]
        ax.semilogy(ks, norms, label=_cell_slug(outcome))
    ax.set_xlabel("outer iteration")
    ax.set_ylabel("gradient norm")
    ax.grid(True, alpha=0.3)
    if len(outcomes) <= 12:
        ax.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
