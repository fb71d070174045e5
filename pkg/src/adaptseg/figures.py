"""Diagnostic figures rendered next to the delimited report."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_run_figure(path, ubar, result, lam_map=None, title=None) -> None:
    """Render one run: input, indicator, mask overlay, weight map, convergence."""
    fig, axes = plt.subplots(2, 3, figsize=(12, 7))

    axes[0, 0].imshow(ubar, cmap="gray", vmin=0.0, vmax=1.0, interpolation="nearest")
    axes[0, 0].set_title("input")
    axes[0, 1].imshow(result.u_final, cmap="gray", vmin=0.0, vmax=1.0, interpolation="nearest")
    axes[0, 1].set_title("indicator u")
    axes[0, 2].imshow(ubar, cmap="gray", vmin=0.0, vmax=1.0, interpolation="nearest")
    if result.mask.any() and not result.mask.all():
        axes[0, 2].contour(result.mask.astype(float), levels=[0.5], colors="r", linewidths=1.0)
    axes[0, 2].set_title("mask boundary")
    for ax in axes[0]:
        ax.set_axis_off()

    if lam_map is not None:
        im = axes[1, 0].imshow(lam_map, cmap="viridis", interpolation="nearest")
        fig.colorbar(im, ax=axes[1, 0], fraction=0.046)
        axes[1, 0].set_title("lambda map")
        axes[1, 0].set_axis_off()
    else:
        axes[1, 0].set_axis_off()

    k = np.arange(1, result.outer_iterations + 1)
    axes[1, 1].plot(k, result.diff_history, marker="o")
    if min(result.diff_history) > 0:
        axes[1, 1].set_yscale("log")
    axes[1, 1].set_xlabel("outer iteration")
    axes[1, 1].set_title("mean squared change")

    axes[1, 2].bar(k, result.gs_counts)
    axes[1, 2].set_xlabel("outer iteration")
    axes[1, 2].set_title("GS sweeps")

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
