"""Scalar fields on a pixel grid and the discrete operators defined on them.

A field is a 2-D float64 array indexed as ``u[i, j]``, ``i`` running down the
rows (x direction) and ``j`` across the columns (y direction).  Every operator
replicates the boundary: values referenced outside the grid equal the nearest
in-grid pixel, so forward differences vanish on the trailing edge.  The
divergence is defined as the negative adjoint of the forward-difference pair
and the Laplacian as the composition of the two, which keeps the operator
algebra mutually consistent:

    <grad u, p> = -<u, div p>        (to machine precision)
    laplacian(u) = div(grad u)       (exactly, same code path)

Grids are small (a few hundred pixels per side), so everything is dense and
convolution is evaluated directly in the spatial domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DimensionError, ParameterError

Array = np.ndarray


def as_grid(values) -> Array:
    """Validate ``values`` as a finite 2-D float64 field and return it."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D grid, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ParameterError("grid contains NaN or Inf values")
    return a


def as_unit_grid(values) -> Array:
    """Like :func:`as_grid`, additionally requiring values in [0, 1]."""
    a = as_grid(values)
    if a.min() < 0.0 or a.max() > 1.0:
        raise ParameterError("grid values must lie in [0, 1]")
    return a


@dataclass(frozen=True)
class Kernel:
    """Square convolution kernel with an odd side length.

    Low-pass kernels (Gaussian, uniform) are normalized so their weights sum
    to one, making convolution an average that fixes constant fields.
    """

    weights: Array

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ParameterError(f"kernel must be square, got shape {w.shape}")
        if w.shape[0] % 2 == 0:
            raise ParameterError(f"kernel size must be odd, got {w.shape[0]}")
        if not np.all(np.isfinite(w)):
            raise ParameterError("kernel contains NaN or Inf weights")
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.weights.shape[0]


def forward_diff_x(u: Array) -> Array:
    """Forward difference along rows; the last row is zero by replication."""
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    out[:-1, :] = u[1:, :] - u[:-1, :]
    return out


def forward_diff_y(u: Array) -> Array:
    """Forward difference along columns; the last column is zero by replication."""
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    out[:, :-1] = u[:, 1:] - u[:, :-1]
    return out


def gradient_magnitude(u: Array) -> Array:
    """Pointwise Euclidean norm of the forward-difference gradient."""
    return np.hypot(forward_diff_x(u), forward_diff_y(u))


def divergence_adjoint(px: Array, py: Array) -> Array:
    """Discrete divergence: the negative adjoint of (forward_diff_x, forward_diff_y).

    Satisfies ``<forward_diff_x(u), px> + <forward_diff_y(u), py> ==
    -<u, divergence_adjoint(px, py)>`` for all fields on the same grid.
    The result is a backward difference whose boundary rows/columns carry the
    flux that the forward operators dropped.
    """
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    if px.shape != py.shape:
        raise DimensionError(f"component shapes differ: {px.shape} vs {py.shape}")
    out = np.zeros_like(px)
    m, n = px.shape
    if m > 1:
        out[0, :] += px[0, :]
        out[1:-1, :] += px[1:-1, :] - px[:-2, :]
        out[-1, :] -= px[-2, :]
    if n > 1:
        out[:, 0] += py[:, 0]
        out[:, 1:-1] += py[:, 1:-1] - py[:, :-2]
        out[:, -1] -= py[:, -2]
    return out


def laplacian(u: Array) -> Array:
    """Five-point Laplacian with replicated boundary.

    Implemented as div(grad u) so it agrees bit for bit with the adjoint
    machinery used to assemble linear systems downstream.
    """
    return divergence_adjoint(forward_diff_x(u), forward_diff_y(u))


def convolve(u: Array, k: Kernel) -> Array:
    """Direct 2-D convolution with replicated boundary."""
    return ndimage.convolve(np.asarray(u, dtype=np.float64), k.weights, mode="nearest")


def project_unit_interval(u: Array) -> Array:
    """Clamp every value to [0, 1]; idempotent."""
    return np.clip(np.asarray(u, dtype=np.float64), 0.0, 1.0)
