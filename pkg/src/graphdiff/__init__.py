"""Graph-aware generative diffusion for signals on a fixed graph.

A heat-equation forward process on the normalized graph Laplacian with a
time-warped drift schedule, closed-form Gaussian marginals diagonal in the
Laplacian eigenbasis, a polynomial graph-filter denoiser network trained
with explicit reverse-mode gradients, Tweedie-score reverse-SDE sampling,
graph-agnostic VPD/VED baselines, and an MMD-based evaluation harness.
"""

from .baselines import VariancePreservingProcess, VarianceExplodingProcess
from .data import (
    SignalDataset,
    adjacency_hash,
    load_adjacency_csv,
    load_community_csv,
    load_dataset_csv,
    load_signals_csv,
    save_adjacency_csv,
    save_community_csv,
    save_signals_csv,
)
from .denoiser import (
    GcnnDenoiser,
    TikhonovDenoiser,
    TrainConfig,
    load_checkpoint,
    mmse_loss,
    save_checkpoint,
    tikhonov_frequency_response,
    train,
)
from .errors import GraphDiffError, NumericalError, ValidationError
from .forward import HeatDiffusionProcess, SpectralGaussian, euler_forward_simulate
from .graphs import (
    Graph,
    Spectrum,
    apply_polynomial_filter,
    build_normalized_laplacian,
    eigendecompose,
    generate_sbm,
    generate_smooth_signals,
    gft,
    igft,
    sbm_communities,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .metrics import (
    MetricsReport,
    degree_correlation,
    evaluate,
    mmd_scalar,
    quadratic_variation,
    spectral_centroid,
)
from .sampling import (
    GaussianOracleScore,
    SamplerConfig,
    TweedieScore,
    ZeroScore,
    euler_maruyama_reverse,
)
from .schedules import FloorPolynomialSchedule, UniformLinearSchedule, schedule_from_dict

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "Spectrum",
    "SignalDataset",
    "SpectralGaussian",
    "HeatDiffusionProcess",
    "VariancePreservingProcess",
    "VarianceExplodingProcess",
    "UniformLinearSchedule",
    "FloorPolynomialSchedule",
    "TikhonovDenoiser",
    "GcnnDenoiser",
    "TrainConfig",
    "TweedieScore",
    "GaussianOracleScore",
    "ZeroScore",
    "SamplerConfig",
    "MetricsReport",
    "GraphDiffError",
    "ValidationError",
    "NumericalError",
    "KERNEL_BACKEND",
    "adjacency_hash",
    "apply_polynomial_filter",
    "build_normalized_laplacian",
    "degree_correlation",
    "eigendecompose",
    "euler_forward_simulate",
    "euler_maruyama_reverse",
    "evaluate",
    "generate_sbm",
    "generate_smooth_signals",
    "gft",
    "igft",
    "load_adjacency_csv",
    "load_checkpoint",
    "load_community_csv",
    "load_dataset_csv",
    "load_signals_csv",
    "mmd_scalar",
    "mmse_loss",
    "quadratic_variation",
    "save_adjacency_csv",
    "save_checkpoint",
    "save_community_csv",
    "save_signals_csv",
    "sbm_communities",
    "schedule_from_dict",
    "spectral_centroid",
    "tikhonov_frequency_response",
    "train",
]
