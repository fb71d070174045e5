"""Spatially varying regularization weights for two-phase segmentation.

The fidelity weight is a per-pixel matrix rather than a scalar: large weights
pin the data term where the image is geometric, small weights let the total
variation term smooth textured or noisy regions.  Every constructed map lies
in a user-chosen band [lambda_min, lambda_max].

Four strategies are provided:

* ``ConstantStrategy`` -- a uniform map, the classical non-adaptive model.
* ``CartoonTextureStrategy`` -- weights from the relative reduction rate of
  local total variation under Gaussian low-pass filtering.  Pixels whose
  local TV barely drops are geometric ("cartoon") and get lambda_max;
  pixels whose local TV collapses are textured and slide toward lambda_min.
* ``MeanMedianStrategy`` -- weights from the disagreement between a mean and
  a median filter, with a cutoff threshold deciding which filter is trusted.
* ``ThresholdStrategy`` -- log-linear interpolation between the bounds driven
  by the evolving indicator u itself; the only map that is recomputed at
  every outer iteration of the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateImageError, ParameterError
from .filters import gaussian_kernel, mean_filter, median_filter
from .grid import Array, Kernel, as_unit_grid, convolve, gradient_magnitude

# Pixels whose local TV falls below this are classified as flat cartoon.
EPS_LTV = 1e-12

# Smallest usable spread of the fidelity gap; below this the image is constant.
EPS_SCALE = 1e-12


def _check_bounds(lambda_min: float, lambda_max: float) -> None:
    if not (0.0 < lambda_min < lambda_max < math.inf):
        raise ParameterError(
            f"need 0 < lambda_min < lambda_max < inf, got ({lambda_min}, {lambda_max})"
        )


@dataclass(frozen=True)
class ConstantStrategy:
    """Uniform weight map; optional bounds only sanity-check the value."""

    lam: float
    lambda_min: float | None = None
    lambda_max: float | None = None
    name = "cen"

    def __post_init__(self):
        if not (0.0 < self.lam < math.inf):
            raise ParameterError(f"lambda must be positive and finite, got {self.lam}")
        if self.lambda_min is not None and self.lambda_max is not None:
            _check_bounds(self.lambda_min, self.lambda_max)
            if not (self.lambda_min <= self.lam <= self.lambda_max):
                raise ParameterError(
                    f"lambda {self.lam} outside bounds ({self.lambda_min}, {self.lambda_max})"
                )


@dataclass(frozen=True)
class CartoonTextureStrategy:
    """Weights from the local-TV reduction rate; built once from the image."""

    lambda_min: float
    lambda_max: float
    sigma: float = 2.0
    size: int = 3
    name = "ctd"

    def __post_init__(self):
        _check_bounds(self.lambda_min, self.lambda_max)
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if self.size < 1 or self.size % 2 == 0:
            raise ParameterError(f"kernel size must be odd, got {self.size}")


@dataclass(frozen=True)
class MeanMedianStrategy:
    """Weights from mean/median filter disagreement; built once from the image."""

    lambda_min: float
    lambda_max: float
    h1: int = 3
    h2: int = 7
    t: float = 0.5
    name = "mm"

    def __post_init__(self):
        _check_bounds(self.lambda_min, self.lambda_max)
        for w in (self.h1, self.h2):
            if w < 1 or w % 2 == 0:
                raise ParameterError(f"filter window must be odd, got {w}")
        if self.t <= 0:
            raise ParameterError(f"threshold t must be positive, got {self.t}")


@dataclass(frozen=True)
class ThresholdStrategy:
    """Log-linear weights driven by the evolving indicator; updated each iteration."""

    lambda_min: float
    lambda_max: float
    name = "thr"

    def __post_init__(self):
        _check_bounds(self.lambda_min, self.lambda_max)


Strategy = Union[ConstantStrategy, CartoonTextureStrategy, MeanMedianStrategy, ThresholdStrategy]


def local_total_variation(u: Array, k: Kernel) -> Array:
    """Low-pass filtered gradient magnitude; nonnegative everywhere."""
    return convolve(gradient_magnitude(u), k)


def relative_reduction_rate(u: Array, k: Kernel) -> Array:
    """Fractional drop of local TV under low-pass filtering, clamped to [0, 1].

    rho = (LTV(u) - LTV(k*u)) / LTV(u).  Near 0 the pixel is geometric, near 1
    it is textured.  Pixels with LTV below ``EPS_LTV`` have no variation to
    reduce and are classified as cartoon (rho = 0).
    """
    ltv_u = local_total_variation(u, k)
    ltv_smooth = local_total_variation(convolve(u, k), k)
    rho = np.zeros_like(ltv_u)
    ok = ltv_u >= EPS_LTV
    rho[ok] = (ltv_u[ok] - ltv_smooth[ok]) / ltv_u[ok]
    return np.clip(rho, 0.0, 1.0)


def lambda_from_score(score: Array, lambda_min: float, lambda_max: float) -> Array:
    """Map a texture score in [0, 1] to a weight in [lambda_min, lambda_max].

    Score 0 (smooth/geometric) gives exactly lambda_max; score 1 gives
    lambda_min.  The ratio floor keeps the map inside the band for any score.
    """
    _check_bounds(lambda_min, lambda_max)
    lam = np.maximum(lambda_min / lambda_max, 1.0 - np.asarray(score, dtype=np.float64))
    return np.clip(lam * lambda_max, lambda_min, lambda_max)


def lambda_ctd(ubar: Array, s: CartoonTextureStrategy) -> Array:
    """Cartoon-texture weight map built from the image to be segmented."""
    rho = relative_reduction_rate(ubar, gaussian_kernel(s.size, s.sigma))
    return lambda_from_score(rho, s.lambda_min, s.lambda_max)


def mm_weights(ubar: Array, h1: int, h2: int, t: float) -> Array:
    """Mean/median disagreement score in [0, 1].

    Where the mean (window h1) and median (window h2) responses differ by less
    than t, the score is the local deviation from the mean; elsewhere the two
    filters disagree on the structure and the score saturates at 1.
    """
    if t <= 0:
        raise ParameterError(f"threshold t must be positive, got {t}")
    ubar = as_unit_grid(ubar)
    smooth = mean_filter(ubar, h1)
    edges = median_filter(ubar, h2)
    return np.where(np.abs(smooth - edges) < t, np.abs(ubar - smooth), 1.0)


def lambda_mm(ubar: Array, s: MeanMedianStrategy) -> Array:
    """Mean-and-median weight map built from the image to be segmented."""
    return lambda_from_score(mm_weights(ubar, s.h1, s.h2, s.t), s.lambda_min, s.lambda_max)


def lambda_thr(u: Array, s: ThresholdStrategy) -> Array:
    """Log-linear weight map driven by the current indicator u in [0, 1].

    lambda = 10^eta with eta interpolating between log10(lambda_min) at u = 0
    and log10(lambda_max) at u = 1.  Endpoints are exact.
    """
    u = np.asarray(u, dtype=np.float64)
    emax = math.log10(s.lambda_max)
    emin = math.log10(s.lambda_min)
    eta = emax - (1.0 - u) * (emax - emin)
    lam = np.clip(10.0**eta, s.lambda_min, s.lambda_max)
    lam[u == 0.0] = s.lambda_min
    lam[u == 1.0] = s.lambda_max
    return lam


def initial_lambda_map(ubar: Array, strategy: Strategy) -> Array:
    """Build the weight map used to start the solver, before rescaling."""
    if isinstance(strategy, ConstantStrategy):
        return np.full(np.asarray(ubar).shape, float(strategy.lam))
    if isinstance(strategy, CartoonTextureStrategy):
        return lambda_ctd(ubar, strategy)
    if isinstance(strategy, MeanMedianStrategy):
        return lambda_mm(ubar, strategy)
    if isinstance(strategy, ThresholdStrategy):
        return lambda_thr(np.asarray(ubar, dtype=np.float64), strategy)
    raise ParameterError(f"unknown strategy {strategy!r}")


def updates_each_iteration(strategy: Strategy) -> bool:
    """True for the one strategy whose map depends on the evolving indicator."""
    return isinstance(strategy, ThresholdStrategy)


def fidelity_gap_range(ubar: Array, c1: float, c2: float) -> float:
    """Spread (max - min) of the per-pixel gap of squared distances to the means.

    The gap s = (c1 - ubar)^2 - (c2 - ubar)^2 drives the fidelity term; its
    range is the scale by which all weight maps are divided so that the
    fidelity's dynamic range stays comparable across images.
    """
    s = (c1 - ubar) ** 2 - (c2 - ubar) ** 2
    return float(s.max() - s.min())


def scale_lambda_map(lam: Array, s_range: float) -> Array:
    """Divide the whole map by the fidelity-gap spread.

    Applied identically to constant and spatially varying maps; the scaled
    map is what the solver consumes.
    """
    if s_range <= EPS_SCALE:
        raise DegenerateImageError(
            "fidelity gap has no spread (constant image or equal region means)"
        )
    return np.asarray(lam, dtype=np.float64) / s_range
