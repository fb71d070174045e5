"""Gaussian, mean, and median filters used by the adaptive weight maps."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import ParameterError
from .grid import Array, Kernel, convolve


def _check_window(window: int) -> None:
    if window < 1 or window % 2 == 0:
        raise ParameterError(f"window must be an odd positive integer, got {window}")


def gaussian_kernel(size: int, sigma: float) -> Kernel:
    """Rotationally symmetric Gaussian kernel, weights normalized to sum 1.

    Weight at offset (a, b) is proportional to exp(-(a^2 + b^2) / (2 sigma^2)).
    """
    _check_window(size)
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    half = (size - 1) // 2
    ax = np.arange(-half, half + 1, dtype=np.float64)
    xx, yy = np.meshgrid(ax, ax, indexing="ij")
    w = np.exp(-(xx**2 + yy**2) / (2.0 * sigma * sigma))
    return Kernel(w / w.sum())


def uniform_kernel(size: int) -> Kernel:
    """Flat averaging kernel of the given odd size."""
    _check_window(size)
    return Kernel(np.full((size, size), 1.0 / (size * size)))


def mean_filter(u: Array, window: int) -> Array:
    """Replace each pixel by the mean of its window, replicated boundary."""
    return convolve(u, uniform_kernel(window))


def median_filter(u: Array, window: int) -> Array:
    """Replace each pixel by the exact median of its window, replicated boundary.

    Odd window means an odd sample count, so the median is a unique order
    statistic and no tie rule is needed.
    """
    _check_window(window)
    return ndimage.median_filter(np.asarray(u, dtype=np.float64), size=window, mode="nearest")
