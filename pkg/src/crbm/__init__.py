"""Bivariate causal direction inference with a mode-uniformity regularized
Gaussian-Bernoulli RBM, slope/entropy baselines, dataset tooling, and a
benchmark harness."""

from .bench import BenchSummary, PairResult, persist_results, roc_auc, run_benchmark, weighted_accuracy
from .criterion import (
    Decision,
    GridSpec,
    capacity_monotonicity_check,
    estimation_capacity,
    gamma,
    ridgeline_area,
)
from .data import (
    CauseEffectPair,
    SimLinSpec,
    first_pc,
    gen_simlin,
    load_simulated,
    load_tuebingen,
    sample_random_distribution,
    write_pairs,
    zscore,
)
from .direction import Direction
from .igci import IgciScore, igci_entropy, igci_slope, vasicek_entropy
from .rbm import (
    EncoderScaling,
    Gradients,
    RbmParams,
    cd_step,
    decode_mean,
    encode_prob,
    exact_log_likelihood,
    free_energy,
    sample_hidden,
    sample_visible,
)
from .regularizer import (
    CenterSet,
    RangeBox,
    boundary_penalty,
    center_set,
    non_uniformity,
    reg_grad,
    reg_term,
)
from .trainer import TrainConfig, TrainResult, init_params, reconstruction_error, train

__version__ = "0.1.0"

__all__ = [
    "BenchSummary",
    "CauseEffectPair",
    "CenterSet",
    "Decision",
    "Direction",
    "EncoderScaling",
    "Gradients",
    "GridSpec",
    "IgciScore",
    "PairResult",
    "RangeBox",
    "RbmParams",
    "SimLinSpec",
    "TrainConfig",
    "TrainResult",
    "boundary_penalty",
    "capacity_monotonicity_check",
    "cd_step",
    "center_set",
    "decode_mean",
    "encode_prob",
    "estimation_capacity",
    "exact_log_likelihood",
    "first_pc",
    "free_energy",
    "gamma",
    "gen_simlin",
    "igci_entropy",
    "igci_slope",
    "init_params",
    "load_simulated",
    "load_tuebingen",
    "non_uniformity",
    "persist_results",
    "reconstruction_error",
    "reg_grad",
    "reg_term",
    "ridgeline_area",
    "roc_auc",
    "run_benchmark",
    "sample_hidden",
    "sample_random_distribution",
    "sample_visible",
    "train",
    "vasicek_entropy",
    "weighted_accuracy",
    "write_pairs",
    "zscore",
]
