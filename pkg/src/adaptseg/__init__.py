"""Two-phase variational image segmentation with spatially adaptive regularization."""

from .errors import (
    DegenerateImageError,
    DimensionError,
    ImageFormatError,
    ParameterError,
)
from .filters import gaussian_kernel, mean_filter, median_filter, uniform_kernel
from .grid import (
    Kernel,
    as_grid,
    as_unit_grid,
    convolve,
    divergence_adjoint,
    forward_diff_x,
    forward_diff_y,
    gradient_magnitude,
    laplacian,
    project_unit_interval,
)
from .image_io import (
    add_gaussian_noise,
    load_image,
    load_mask,
    save_image,
    save_lambda_heatmap,
    save_mask,
)
from .lambda_maps import (
    CartoonTextureStrategy,
    ConstantStrategy,
    MeanMedianStrategy,
    Strategy,
    ThresholdStrategy,
    fidelity_gap_range,
    initial_lambda_map,
    lambda_ctd,
    lambda_from_score,
    lambda_mm,
    lambda_thr,
    local_total_variation,
    mm_weights,
    relative_reduction_rate,
    scale_lambda_map,
)
from .metrics import dice_jaccard
from .solver import (
    SegmentationResult,
    SolverConfig,
    SolverState,
    bregman_step,
    energy,
    fidelity_residual,
    gauss_seidel,
    initial_state,
    outer_stopped,
    segment,
    shrink,
    solve_u_subproblem,
    update_region_means,
)
from .synth import make_shape

__version__ = "0.1.0"

__all__ = [
    "CartoonTextureStrategy",
    "ConstantStrategy",
    "DegenerateImageError",
    "DimensionError",
    "ImageFormatError",
    "Kernel",
    "MeanMedianStrategy",
    "ParameterError",
    "SegmentationResult",
    "SolverConfig",
    "SolverState",
    "Strategy",
    "ThresholdStrategy",
    "add_gaussian_noise",
    "as_grid",
    "as_unit_grid",
    "bregman_step",
    "convolve",
    "dice_jaccard",
    "divergence_adjoint",
    "energy",
    "fidelity_gap_range",
    "fidelity_residual",
    "forward_diff_x",
    "forward_diff_y",
    "gauss_seidel",
    "gaussian_kernel",
    "gradient_magnitude",
    "initial_lambda_map",
    "initial_state",
    "lambda_ctd",
    "lambda_from_score",
    "lambda_mm",
    "lambda_thr",
    "laplacian",
    "load_image",
    "load_mask",
    "local_total_variation",
    "make_shape",
    "mean_filter",
    "median_filter",
    "mm_weights",
    "outer_stopped",
    "project_unit_interval",
    "relative_reduction_rate",
    "save_image",
    "save_lambda_heatmap",
    "save_mask",
    "scale_lambda_map",
    "segment",
    "shrink",
    "solve_u_subproblem",
    "uniform_kernel",
    "update_region_means",
]
