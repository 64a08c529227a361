"""Structure-guided total variation reconstruction of undersampled MRI."""

from .grid import (
    Anisotropy,
    apply_anisotropy,
    divergence,
    gradient,
    pointwise_norm,
    project_nonneg,
    project_unit_ball,
)
from .priors import (
    PriorKind,
    direction_from_side_info,
    eval_regularizer,
    make_anisotropy,
    smoothed_magnitude,
    weights_from_side_info,
)
from .fgp import ProxResult, prox_objective, prox_structured_tv
from .mri import SamplingPattern, adjoint, dft2, forward, idft2, mask_counts
from .sampling import PatternSpec, generate, undersampling_factor
from .admm import AdmmConfig, reconstruct
from .phantoms import shepp_logan_pair, simulate, noise_sigma
from .metrics import psnr, ssim

__version__ = "0.1.0"

__all__ = [
    "Anisotropy", "apply_anisotropy", "divergence", "gradient", "pointwise_norm",
    "project_nonneg", "project_unit_ball", "PriorKind", "direction_from_side_info",
    "eval_regularizer", "make_anisotropy", "smoothed_magnitude",
    "weights_from_side_info", "ProxResult", "prox_objective", "prox_structured_tv",
    "SamplingPattern", "adjoint", "dft2", "forward", "idft2", "mask_counts",
    "PatternSpec", "generate", "undersampling_factor", "AdmmConfig", "reconstruct",
    "shepp_logan_pair", "simulate", "noise_sigma", "psnr", "ssim",
]
