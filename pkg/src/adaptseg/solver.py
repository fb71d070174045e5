"""Alternating minimization with split Bregman iterations.

The model minimized is

    sum_ij ( |dx+ u|_ij + |dy+ u|_ij )
      + sum_ij lam_ij ( (c1 - ubar_ij)^2 u_ij + (c2 - ubar_ij)^2 (1 - u_ij) ),
    subject to 0 <= u <= 1,

alternating closed-form updates of the region means (c1, c2) with a split
Bregman step in u.  The u-subproblem couples the linear fidelity residual r
with the splitting quadratics; its stationarity condition

    mu (grad^T grad) u = -r + mu grad^T (d - b)

is singular under the replicated boundary (constants are in the nullspace),
so a proximal anchor (mu/2) ||u - u_prev||^2 is added.  The anchor leaves the
fixed points of the outer iteration unchanged while making the system

    (I - laplacian) u = u_prev - r / mu + div(b - d)

strictly diagonally dominant, hence solvable by plain Gauss-Seidel sweeps.
Sweeps run in lexicographic order with in-place updates; the result is
projected onto [0, 1] once per outer iteration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import ParameterError
from .grid import (
    Array,
    as_unit_grid,
    divergence_adjoint,
    forward_diff_x,
    forward_diff_y,
    project_unit_interval,
)
from .lambda_maps import (
    Strategy,
    fidelity_gap_range,
    initial_lambda_map,
    lambda_thr,
    scale_lambda_map,
    updates_each_iteration,
)

# Region-mean denominators below this trigger the global-mean fallback.
EPS_DEN = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters: splitting weight, tolerances, iteration caps."""

    mu: float
    tol: float = 1e-6
    maxit: int = 30
    tol_gs: float = 1e-2
    maxit_gs: int = 50
    alpha: float = 0.5

    def __post_init__(self):
        if self.mu <= 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")
        if self.tol <= 0 or self.tol_gs <= 0:
            raise ParameterError("tolerances must be positive")
        if self.maxit < 1 or self.maxit_gs < 1:
            raise ParameterError("iteration caps must be >= 1")
        if not (0.0 < self.alpha < 1.0):
            raise ParameterError(f"alpha must lie strictly inside (0, 1), got {self.alpha}")


@dataclass
class SolverState:
    """Evolving solver variables after k outer iterations."""

    u: Array
    dx: Array
    dy: Array
    bx: Array
    by: Array
    c1: float = 0.0
    c2: float = 0.0
    k: int = 0
    diff_history: list = field(default_factory=list)
    gs_counts: list = field(default_factory=list)
    c1_history: list = field(default_factory=list)
    c2_history: list = field(default_factory=list)


@dataclass
class SegmentationResult:
    """Final indicator, binary mask, region means, and convergence record."""

    u_final: Array
    mask: Array
    c1: float
    c2: float
    outer_iterations: int
    mean_gs_iterations: float
    converged: bool
    diff_history: list
    gs_counts: list
    c1_history: list
    c2_history: list

    def trace_table(self) -> str:
        """Plain-text convergence trace: one row per outer iteration."""
        lines = [f"{'k':>4} {'diff':>24} {'gs_iters':>8} {'c1':>24} {'c2':>24}"]
        for i in range(self.outer_iterations):
            lines.append(
                f"{i + 1:>4} {self.diff_history[i]:>24.16e} {self.gs_counts[i]:>8d}"
                f" {self.c1_history[i]:>24.16e} {self.c2_history[i]:>24.16e}"
            )
        return "\n".join(lines) + "\n"


def initial_state(ubar: Array) -> SolverState:
    """Start from u = ubar with zero splitting and Bregman fields."""
    u0 = np.array(ubar, dtype=np.float64)
    zeros = np.zeros_like(u0)
    return SolverState(
        u=u0, dx=zeros.copy(), dy=zeros.copy(), bx=zeros.copy(), by=zeros.copy()
    )


def update_region_means(u: Array, ubar: Array, lam: Array) -> tuple[float, float]:
    """Closed-form weighted means of the two phases under the indicator u.

    c1 averages ubar where u is large, c2 where u is small, both weighted by
    the regularization map.  A vanishing denominator (u identically 0 or 1)
    falls back to the unweighted global mean with a warning, so that extreme
    early iterates do not abort the run.
    """
    w1 = lam * u
    w2 = lam * (1.0 - u)
    den1 = float(w1.sum())
    den2 = float(w2.sum())
    if den1 < EPS_DEN:
        warnings.warn("foreground weight vanished; using global mean for c1", stacklevel=2)
        c1 = float(ubar.mean())
    else:
        c1 = float((w1 * ubar).sum() / den1)
    if den2 < EPS_DEN:
        warnings.warn("background weight vanished; using global mean for c2", stacklevel=2)
        c2 = float(ubar.mean())
    else:
        c2 = float((w2 * ubar).sum() / den2)
    return c1, c2


def fidelity_residual(ubar: Array, lam: Array, c1: float, c2: float) -> Array:
    """Per-pixel fidelity coefficient r = lam ((c1 - ubar)^2 - (c2 - ubar)^2).

    Negative where ubar is closer to c1, positive where closer to c2; the
    u-subproblem pushes u toward 1 where r < 0.
    """
    return lam * ((c1 - ubar) ** 2 - (c2 - ubar) ** 2)


@njit(cache=True)
def _gs_sweeps(u, f, tol_gs, maxit_gs):  # pragma: no cover - compiled
    """In-place Gauss-Seidel on (I - laplacian) u = f, lexicographic order.

    Stops when the mean squared per-sweep change has dropped below tol_gs
    relative to the first sweep, or at the sweep cap.  Returns the number of
    sweeps performed.
    """
    m, n = u.shape
    msd1 = -1.0
    sweeps = 0
    for _ in range(maxit_gs):
        acc = 0.0
        for i in range(m):
            for j in range(n):
                s = 0.0
                diag = 1.0
                if i > 0:
                    s += u[i - 1, j]
                    diag += 1.0
                if i < m - 1:
                    s += u[i + 1, j]
                    diag += 1.0
                if j > 0:
                    s += u[i, j - 1]
                    diag += 1.0
                if j < n - 1:
                    s += u[i, j + 1]
                    diag += 1.0
                new = (s + f[i, j]) / diag
                delta = new - u[i, j]
                acc += delta * delta
                u[i, j] = new
        sweeps += 1
        msd = acc / (m * n)
        if sweeps == 1:
            msd1 = msd
            if msd1 <= 0.0:
                break
        if msd / msd1 <= tol_gs:
            break
    return sweeps


def gauss_seidel(u0: Array, f: Array, tol_gs: float, maxit_gs: int) -> tuple[Array, int]:
    """Gauss-Seidel solve of (I - laplacian) u = f starting from u0.

    Returns the (unclamped) iterate and the number of sweeps.
    """
    u = np.ascontiguousarray(u0, dtype=np.float64).copy()
    f = np.ascontiguousarray(f, dtype=np.float64)
    sweeps = _gs_sweeps(u, f, float(tol_gs), int(maxit_gs))
    return u, int(sweeps)


def subproblem_rhs(state: SolverState, r: Array, mu: float) -> Array:
    """Right-hand side of the anchored u-subproblem system."""
    return state.u - r / mu + divergence_adjoint(state.bx - state.dx, state.by - state.dy)


def solve_u_subproblem(state: SolverState, r: Array, cfg: SolverConfig) -> tuple[Array, int]:
    """One inner solve: Gauss-Seidel on the anchored system, then clamp to [0, 1]."""
    f = subproblem_rhs(state, r, cfg.mu)
    u, sweeps = gauss_seidel(state.u, f, cfg.tol_gs, cfg.maxit_gs)
    return project_unit_interval(u), sweeps


def shrink(v: Array, gamma: float) -> Array:
    """Soft threshold: sign(v) * max(|v| - gamma, 0), with 0 at v = 0."""
    if gamma <= 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    v = np.asarray(v, dtype=np.float64)
    return np.sign(v) * np.maximum(np.abs(v) - gamma, 0.0)


def bregman_step(state: SolverState, ubar: Array, lam: Array, cfg: SolverConfig) -> SolverState:
    """One full outer iteration: means, u-solve + projection, shrinkage, Bregman update."""
    c1, c2 = update_region_means(state.u, ubar, lam)
    r = fidelity_residual(ubar, lam, c1, c2)
    u_new, sweeps = solve_u_subproblem(state, r, cfg)
    gx = forward_diff_x(u_new)
    gy = forward_diff_y(u_new)
    dx = shrink(gx + state.bx, 1.0 / cfg.mu)
    dy = shrink(gy + state.by, 1.0 / cfg.mu)
    bx = state.bx + gx - dx
    by = state.by + gy - dy
    diff = float(((u_new - state.u) ** 2).mean())
    return SolverState(
        u=u_new,
        dx=dx,
        dy=dy,
        bx=bx,
        by=by,
        c1=c1,
        c2=c2,
        k=state.k + 1,
        diff_history=state.diff_history + [diff],
        gs_counts=state.gs_counts + [sweeps],
        c1_history=state.c1_history + [c1],
        c2_history=state.c2_history + [c2],
    )


def outer_stopped(diff_history: list, k: int, cfg: SolverConfig) -> bool:
    """Stop when successive mean-squared-change values stall, or at the cap."""
    if k >= cfg.maxit:
        return True
    if k >= 2 and abs(diff_history[-1] - diff_history[-2]) <= cfg.tol:
        return True
    return False


def energy(u: Array, ubar: Array, lam: Array, c1: float, c2: float) -> float:
    """Objective value: anisotropic TV plus the weighted two-phase fidelity."""
    tv = float(np.abs(forward_diff_x(u)).sum() + np.abs(forward_diff_y(u)).sum())
    fid = float((lam * ((c1 - ubar) ** 2 * u + (c2 - ubar) ** 2 * (1.0 - u))).sum())
    return tv + fid


def segment(ubar: Array, strategy: Strategy, cfg: SolverConfig) -> SegmentationResult:
    """Run the full alternating scheme and threshold the result at alpha.

    The weight map is built from the input image, rescaled by the spread of
    the initial fidelity gap, and (for the threshold strategy only) rebuilt
    from the current iterate at the top of every outer iteration.
    """
    ubar = as_unit_grid(ubar)
    lam0 = initial_lambda_map(ubar, strategy)
    state = initial_state(ubar)
    c1_0, c2_0 = update_region_means(state.u, ubar, lam0)
    s_range = fidelity_gap_range(ubar, c1_0, c2_0)
    lam = scale_lambda_map(lam0, s_range)

    converged = False
    while True:
        if updates_each_iteration(strategy):
            lam = scale_lambda_map(lambda_thr(state.u, strategy), s_range)
        state = bregman_step(state, ubar, lam, cfg)
        if state.k >= 2 and abs(state.diff_history[-1] - state.diff_history[-2]) <= cfg.tol:
            converged = True
            break
        if state.k >= cfg.maxit:
            break

    mask = state.u > cfg.alpha
    return SegmentationResult(
        u_final=state.u,
        mask=mask,
        c1=state.c1,
        c2=state.c2,
        outer_iterations=state.k,
        mean_gs_iterations=float(np.mean(state.gs_counts)),
        converged=converged,
        diff_history=state.diff_history,
        gs_counts=state.gs_counts,
        c1_history=state.c1_history,
        c2_history=state.c2_history,
    )
