"""Figure rendering for the CLI report paths.

All functions write PNG files; matplotlib runs on the Agg backend so the
CLI works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .geomesh import Mesh  # noqa: E402
from .ingest import FieldCollection, Resolution, ScalarField  # noqa: E402
from .pulse import Pulse, SimilarityResult  # noqa: E402

# Beat strip colors: not a maximum / maximum / high-persistent maximum.
STRIP_COLORS = {0: "#ffffff", 1: "#90ee90", 2: "#1e6b1e"}


def save_field_heatmap(f: ScalarField, mesh: Mesh, path: str | Path,
                       normalized: bool = True) -> Path:
    """Render one scalar field as a heat map over the mesh grid."""
    values = f.norm if normalized else f.raw
    grid = values.reshape(mesh.ny, mesh.nx)
    fig, ax = plt.subplots(figsize=(8, 8 * mesh.ny / mesh.nx))
    im = ax.imshow(grid, origin="lower", cmap="inferno",
                   extent=(0, (mesh.nx - 1) * mesh.spacing,
                           0, (mesh.ny - 1) * mesh.spacing))
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title(f"{f.resolution.label} step {f.step}"
                 + (" (normalized)" if normalized else " (raw)"))
    ax.set_xlabel("m east")
    ax.set_ylabel("m north")
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def strip_levels(pulse: Pulse, res: Resolution) -> np.ndarray:
    """Per-step strip level: 0 none, 1 maximum, 2 high-persistent."""
    mx = pulse.beats.maxima[res]
    sig = pulse.beats.significant[res]
    return np.asarray(mx, dtype=np.int8) + np.asarray(sig, dtype=np.int8)


def save_beats_figure(pulse: Pulse, res: Resolution, path: str | Path,
                      normalized: bool = True, title: str = "") -> Path:
    """Function-beat line plot stacked over the maxima/significant circle
    strip for one pulse and resolution."""
    fn = pulse.beats.function[res] if normalized \
        else pulse.beats.function_raw[res]
    steps = np.arange(res.step_count)
    fig, (ax, strip) = plt.subplots(
        2, 1, figsize=(max(4, res.step_count * 0.35), 3),
        height_ratios=[4, 1], sharex=True)
    ax.plot(steps, fn, "-o", ms=3, color="#1f77b4")
    ax.set_ylabel("normalized f" if normalized else "f")
    ax.set_title(title or f"pulse {pulse.id}, {res.label} "
                 f"(rank {pulse.rank:.3f})")
    levels = strip_levels(pulse, res)
    strip.scatter(steps, np.zeros_like(steps), s=120,
                  c=[STRIP_COLORS[int(l)] for l in levels],
                  edgecolors="#555555", zorder=3)
    strip.set_ylim(-1, 1)
    strip.set_yticks([])
    strip.set_xlabel("step")
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def save_rank_scatter(pulses: list[Pulse], path: str | Path) -> Path:
    """Per-resolution rank scatter plots: x restricted rank, y overall."""
    if not pulses:
        resolutions = []
    else:
        resolutions = [r for r in pulses[0].beats.resolutions
                       if r is not Resolution.ALL]
    n = max(1, len(resolutions))
    fig, axes = plt.subplots(1, n, figsize=(4 * n, 4), squeeze=False)
    for ax, res in zip(axes[0], resolutions):
        xs = [p.resolution_ranks[res] for p in pulses]
        ys = [p.rank for p in pulses]
        ax.scatter(xs, ys, s=16, color="#1f77b4", alpha=0.8)
        ax.set_xlabel(f"{res.label} rank")
        ax.set_ylabel("rank")
        ax.set_title(res.label)
    if not resolutions:
        axes[0][0].set_title("no pulses")
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def save_similarity_figure(results: list[SimilarityResult],
                           path: str | Path) -> Path:
    """One row per source pulse (descending rank), matches ordered left to
    right by ascending measure."""
    fig, ax = plt.subplots(
        figsize=(8, max(2, 0.5 * len(results) + 1)))
    for row, res in enumerate(results):
        y = len(results) - 1 - row
        ax.text(-0.5, y, f"src {res.source_id} ({res.source_rank:.2f})",
                ha="right", va="center", fontsize=9)
        for col, (tid, measure) in enumerate(res.matches):
            ax.scatter([col], [y], s=200, c="#ff7f0e", alpha=0.8, zorder=3)
            ax.annotate(f"{tid}\n{measure:.2f}", (col, y),
                        ha="center", va="center", fontsize=7)
    ax.set_xlim(-3, max((len(r.matches) for r in results), default=1))
    ax.set_ylim(-1, len(results))
    ax.set_yticks([])
    ax.set_xlabel("ascending similarity measure")
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
