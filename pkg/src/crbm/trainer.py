"""Gradient-descent training of the regularized RBM on one bivariate sample.

Each epoch takes one full-batch contrastive step (hidden patterns resampled
every epoch) plus the weighted mode-uniformity gradient, with the step size
decaying exponentially over epochs.  Training stops early once the smoothed
total loss has stopped improving.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rbm import (
    EncoderScaling,
    Gradients,
    RbmParams,
    cd_step,
    decode_mean,
    sample_hidden,
)
from .regularizer import RangeBox, reg_grad, reg_term


@dataclass(frozen=True)
class TrainConfig:
    """All training hyperparameters.

    ``lam`` weighs the mode-uniformity term against the contrastive loss;
    ``eta``, ``decay_q`` and ``decay_unit`` define the step size
    eta * decay_q**(epoch / decay_unit), an exponential anneal spread over the
    epoch budget.
    ``grad_clip`` caps the global norm of the combined gradient so that
    extreme ``lam`` values stay numerically stable; it is far above the norms
    seen at the default settings.
    """

    m: int = 5
    sigma: float = 0.5
    lam: float = 1.0
    eta: float = 1e-3
    decay_q: float = 0.9
    decay_unit: int = 100
    max_epochs: int = 5000
    patience: int = 50
    min_delta: float = 1e-5
    seed: int = 0
    encoder_scaling: EncoderScaling = EncoderScaling.ENERGY_CONSISTENT
    sample_reconstruction: bool = False
    holdout_frac: float = 0.2
    grad_clip: float = 10.0
    ema_factor: float = 0.9
    init_scale: float = 0.01

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not 0 < self.decay_q <= 1:
            raise ValueError("decay_q must be in (0, 1]")
        if self.decay_unit < 1:
            raise ValueError("decay_unit must be >= 1")
        if self.max_epochs < 1 or self.patience < 1:
            raise ValueError("max_epochs and patience must be >= 1")
        if not 0 <= self.holdout_frac < 1:
            raise ValueError("holdout_frac must be in [0, 1)")
        if self.init_scale < 0:
            raise ValueError("init_scale must be >= 0")


@dataclass(frozen=True)
class TrainResult:
    """Trained parameters plus the per-epoch record of the run."""

    params: RbmParams
    loss_trace: np.ndarray  # (epochs_run, 3): contrastive, regularizer, total
    step_trace: np.ndarray  # (epochs_run,): applied step sizes
    epochs_run: int
    recon_error: float
    ranges: RangeBox


def init_params(config: TrainConfig, rng: np.random.Generator) -> RbmParams:
    """Small Gaussian weights (sd init_scale, default 0.01), zero biases,
    fixed sigma from config."""
    return RbmParams(
        weights=config.init_scale * rng.standard_normal((config.m, 2)),
        vis_bias=np.zeros(2),
        hid_bias=np.zeros(config.m),
        sigma=config.sigma,
    )


def reconstruction_error(
    params: RbmParams,
    data: np.ndarray,
    rng: np.random.Generator,
    n_samples: int = 16,
    scaling: EncoderScaling = EncoderScaling.ENERGY_CONSISTENT,
) -> float:
    """Mean squared distance between points and their decoded means, averaged
    over ``n_samples`` hidden draws per point."""
    data = np.atleast_2d(np.asarray(data, dtype=float))
    total = 0.0
    for _ in range(n_samples):
        recon = decode_mean(params, sample_hidden(params, data, rng, scaling))
        total += float(np.mean(np.sum((data - recon) ** 2, axis=1)))
    return total / n_samples


def _clipped(grad: Gradients, max_norm: float) -> Gradients:
    if max_norm <= 0:
        return grad
    norm = np.sqrt(
        np.sum(grad.weights**2) + np.sum(grad.vis_bias**2) + np.sum(grad.hid_bias**2)
    )
    if norm <= max_norm:
        return grad
    return grad.scaled(max_norm / norm)


def train(xy: np.ndarray, config: TrainConfig, rng: np.random.Generator | None = None) -> TrainResult:
    """Fit the regularized RBM to a normalized (x, y) sample.

    The sample is split 80/20, the data ranges are frozen from the training
    split before the first epoch, and the held-out fifth is only used for the
    final reconstruction error.  Raises on zero variance in either coordinate
    since the target spacing would collapse.
    """
    xy = np.asarray(xy, dtype=float)
    if xy.ndim != 2 or xy.shape[1] != 2 or xy.shape[0] < 2:
        raise ValueError(f"need an (n, 2) sample with n >= 2, got shape {xy.shape}")
    if np.any(xy.std(axis=0) == 0):
        raise ValueError("zero variance in a coordinate; cannot train")
    if rng is None:
        rng = np.random.default_rng(config.seed)

    params = init_params(config, rng)
    perm = rng.permutation(xy.shape[0])
    n_hold = int(round(config.holdout_frac * xy.shape[0]))
    n_hold = min(n_hold, xy.shape[0] - 2)
    held_out = xy[perm[:n_hold]]
    train_split = xy[perm[n_hold:]]
    if np.any(train_split.std(axis=0) == 0):
        raise ValueError("zero variance in the training split; cannot train")
    ranges = RangeBox.from_sample(train_split)

    losses = []
    steps = []
    ema = None
    best_ema = np.inf
    stall = 0
    for epoch in range(config.max_epochs):
        step = config.eta * config.decay_q ** (epoch / config.decay_unit)
        cd_loss, grad = cd_step(
            params,
            train_split,
            rng,
            scaling=config.encoder_scaling,
            sample_reconstruction=config.sample_reconstruction,
        )
        if config.lam > 0:
            reg_value = reg_term(params, ranges)
            grad = grad + reg_grad(params, ranges).scaled(config.lam)
        else:
            reg_value = 0.0
        total = cd_loss + config.lam * reg_value
        grad = _clipped(grad, config.grad_clip)
        params = RbmParams(
            weights=params.weights - step * grad.weights,
            vis_bias=params.vis_bias - step * grad.vis_bias,
            hid_bias=params.hid_bias - step * grad.hid_bias,
            sigma=params.sigma,
        )
        losses.append((cd_loss, reg_value, total))
        steps.append(step)

        ema = total if ema is None else config.ema_factor * ema + (1 - config.ema_factor) * total
        if ema < best_ema - config.min_delta:
            best_ema = ema
            stall = 0
        else:
            stall += 1
        if stall >= config.patience:
            break

    eval_data = held_out if held_out.shape[0] > 0 else train_split
    recon = reconstruction_error(params, eval_data, rng, scaling=config.encoder_scaling)
    return TrainResult(
        params=params,
        loss_trace=np.array(losses),
        step_trace=np.array(steps),
        epochs_run=len(losses),
        recon_error=recon,
        ranges=ranges,
    )
