"""Synthetic two-phase test images with exact ground-truth masks."""

from __future__ import annotations

import warnings

import numpy as np

from .errors import ParameterError

SHAPES = ("disk", "square", "two-blobs", "checker")


def _index_grids(rows: int, cols: int):
    return np.meshgrid(
        np.arange(rows, dtype=np.float64), np.arange(cols, dtype=np.float64), indexing="ij"
    )


def _disk_mask(rows, cols, ci, cj, radius):
    ii, jj = _index_grids(rows, cols)
    return (ii - ci) ** 2 + (jj - cj) ** 2 <= radius**2


def make_shape(
    shape: str, rows: int, cols: int, fg: float = 0.8, bg: float = 0.2, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Build (image, mask) for a named two-phase geometry.

    All four generators are deterministic; ``seed`` is accepted for interface
    stability and reserved for randomized variants.
    """
    if rows < 1 or cols < 1:
        raise ParameterError(f"bad image size {rows}x{cols}")
    if not (0.0 <= fg <= 1.0 and 0.0 <= bg <= 1.0):
        raise ParameterError("fg and bg intensities must lie in [0, 1]")
    if fg == bg:
        warnings.warn("fg == bg gives a constant image, which cannot be segmented", stacklevel=2)

    ci, cj = (rows - 1) / 2.0, (cols - 1) / 2.0
    if shape == "disk":
        mask = _disk_mask(rows, cols, ci, cj, min(rows, cols) / 4.0)
    elif shape == "square":
        side = min(rows, cols) // 2
        ii, jj = _index_grids(rows, cols)
        mask = (np.abs(ii - ci) <= side / 2.0) & (np.abs(jj - cj) <= side / 2.0)
    elif shape == "two-blobs":
        r = min(rows, cols) / 6.0
        mask = _disk_mask(rows, cols, rows / 3.0, cols / 3.0, r) | _disk_mask(
            rows, cols, 2.0 * rows / 3.0, 2.0 * cols / 3.0, r
        )
    elif shape == "checker":
        cell = max(1, min(rows, cols) // 8)
        ii, jj = _index_grids(rows, cols)
        mask = ((ii // cell).astype(int) + (jj // cell).astype(int)) % 2 == 0
    else:
        raise ParameterError(f"unknown shape {shape!r}; choose from {SHAPES}")

    image = np.where(mask, float(fg), float(bg))
    return image, mask
