"""Gaussian-Bernoulli restricted Boltzmann machine on two visible units.

The model couples a 2-dimensional real visible vector v with m binary hidden
units h through the energy

    E(v, h) = sum_j (v_j - b_j)^2 / (2 sigma^2) - c.h - h^T W v / sigma^2

which yields a Bernoulli encoder with means sigmoid(c + W v / sigma^2) and a
Gaussian decoder N(b + W^T h, sigma^2 I).  ``EncoderScaling.UNSCALED`` drops
the 1/sigma^2 factor from the encoder pre-activation (the two coincide at
sigma = 1); free energies always use the energy-consistent form above.

Conventions: visible points are float arrays of shape (2,) or (n, 2), hidden
patterns are 0/1 arrays of shape (m,) or (n, m).  All sampling is driven by an
explicit ``numpy.random.Generator`` so every operation is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

_P_LO = 1e-300
_P_HI = float(np.nextafter(1.0, 0.0))


class EncoderScaling(str, Enum):
    """Pre-activation convention for the encoder."""

    ENERGY_CONSISTENT = "energy_consistent"  # sigmoid(c + W v / sigma^2)
    UNSCALED = "unscaled"                    # sigmoid(c + W v)


@dataclass(frozen=True)
class RbmParams:
    """Full parameter vector: weights (m, 2), biases and fixed decoder width.

    ``weights[i]`` holds the connections of hidden unit i to both visible
    units; ``vis_bias`` has length 2, ``hid_bias`` length m; ``sigma`` is the
    decoder standard deviation and is never trained.
    """

    weights: np.ndarray
    vis_bias: np.ndarray
    hid_bias: np.ndarray
    sigma: float

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        b = np.array(self.vis_bias, dtype=float)
        c = np.array(self.hid_bias, dtype=float)
        if w.ndim != 2 or w.shape[1] != 2 or w.shape[0] < 1:
            raise ValueError(f"weights must have shape (m, 2) with m >= 1, got {w.shape}")
        if b.shape != (2,):
            raise ValueError(f"vis_bias must have shape (2,), got {b.shape}")
        if c.shape != (w.shape[0],):
            raise ValueError(f"hid_bias must have shape ({w.shape[0]},), got {c.shape}")
        if not (np.isfinite(w).all() and np.isfinite(b).all() and np.isfinite(c).all()):
            raise ValueError("parameters must be finite")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        for name, arr in (("weights", w), ("vis_bias", b), ("hid_bias", c)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.weights.shape[0]


@dataclass
class Gradients:
    """Parameter-shaped gradient (same layout as the trainable part of RbmParams)."""

    weights: np.ndarray
    vis_bias: np.ndarray
    hid_bias: np.ndarray

    @staticmethod
    def zeros(m: int) -> "Gradients":
        return Gradients(np.zeros((m, 2)), np.zeros(2), np.zeros(m))

    def __add__(self, other: "Gradients") -> "Gradients":
        return Gradients(
            self.weights + other.weights,
            self.vis_bias + other.vis_bias,
            self.hid_bias + other.hid_bias,
        )

    def scaled(self, factor: float) -> "Gradients":
        return Gradients(factor * self.weights, factor * self.vis_bias, factor * self.hid_bias)

    def max_abs(self) -> float:
        return max(
            np.abs(self.weights).max(),
            np.abs(self.vis_bias).max(),
            np.abs(self.hid_bias).max(),
        )


def sigmoid(x):
    """Overflow-safe logistic function."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softplus(x):
    """Overflow-safe log(1 + exp(x))."""
    x = np.asarray(x, dtype=float)
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _vis_rows(v) -> tuple[np.ndarray, bool]:
    arr = np.asarray(v, dtype=float)
    single = arr.ndim == 1
    rows = np.atleast_2d(arr)
    if rows.shape[1] != 2:
        raise ValueError(f"visible points must have 2 coordinates, got shape {arr.shape}")
    return rows, single


def _hid_rows(params: RbmParams, h) -> tuple[np.ndarray, bool]:
    arr = np.asarray(h, dtype=float)
    single = arr.ndim == 1
    rows = np.atleast_2d(arr)
    if rows.shape[1] != params.m:
        raise ValueError(f"hidden patterns must have {params.m} bits, got shape {arr.shape}")
    return rows, single


def _encoder_preactivation(params: RbmParams, rows: np.ndarray, scaling: EncoderScaling) -> np.ndarray:
    scale = 1.0 if scaling == EncoderScaling.UNSCALED else 1.0 / params.sigma**2
    return params.hid_bias + scale * (rows @ params.weights.T)


def encode_prob(
    params: RbmParams,
    v,
    scaling: EncoderScaling = EncoderScaling.ENERGY_CONSISTENT,
) -> np.ndarray:
    """Bernoulli means of the hidden units given visible input.

    Returns an array of shape (m,) for a single point or (n, m) for a batch;
    every entry is clamped into the open interval (0, 1).
    """
    rows, single = _vis_rows(v)
    p = np.clip(sigmoid(_encoder_preactivation(params, rows, scaling)), _P_LO, _P_HI)
    return p[0] if single else p


def sample_hidden(
    params: RbmParams,
    v,
    rng: np.random.Generator,
    scaling: EncoderScaling = EncoderScaling.ENERGY_CONSISTENT,
) -> np.ndarray:
    """Draw hidden patterns, each bit an independent Bernoulli from encode_prob."""
    rows, single = _vis_rows(v)
    p = encode_prob(params, rows, scaling)
    bits = (rng.random(p.shape) < p).astype(float)
    return bits[0] if single else bits


def decode_mean(params: RbmParams, h) -> np.ndarray:
    """Decoder mean b + W^T h for one pattern or a batch of patterns."""
    rows, single = _hid_rows(params, h)
    mean = params.vis_bias + rows @ params.weights
    return mean[0] if single else mean


def sample_visible(params: RbmParams, h, rng: np.random.Generator) -> np.ndarray:
    """Draw visible points from N(decode_mean(h), sigma^2 I)."""
    rows, single = _hid_rows(params, h)
    mean = params.vis_bias + rows @ params.weights
    draw = mean + params.sigma * rng.standard_normal(mean.shape)
    return draw[0] if single else draw


def free_energy(params: RbmParams, v) -> np.ndarray | float:
    """Free energy F(v) = -log sum_h exp(-E(v, h)), in closed form.

    F(v) = sum_j (v_j - b_j)^2 / (2 sigma^2) - sum_i softplus(c_i + W_i v / sigma^2).
    Always uses the energy-consistent encoder scaling.
    """
    rows, single = _vis_rows(v)
    quad = np.sum((rows - params.vis_bias) ** 2, axis=1) / (2.0 * params.sigma**2)
    s = _encoder_preactivation(params, rows, EncoderScaling.ENERGY_CONSISTENT)
    f = quad - softplus(s).sum(axis=1)
    return float(f[0]) if single else f


def energy(params: RbmParams, v, h) -> float:
    """Joint energy E(v, h) of one visible point and one hidden pattern."""
    v = np.asarray(v, dtype=float)
    h = np.asarray(h, dtype=float)
    quad = np.sum((v - params.vis_bias) ** 2) / (2.0 * params.sigma**2)
    return float(quad - params.hid_bias @ h - (h @ params.weights @ v) / params.sigma**2)


def _free_energy_grad_mean(params: RbmParams, rows: np.ndarray) -> Gradients:
    """Gradient of mean_i F(rows_i) with respect to (W, b, c)."""
    n = rows.shape[0]
    s = _encoder_preactivation(params, rows, EncoderScaling.ENERGY_CONSISTENT)
    p = sigmoid(s)
    inv_var = 1.0 / params.sigma**2
    d_w = -(p.T @ rows) * inv_var / n
    d_b = -np.sum(rows - params.vis_bias, axis=0) * inv_var / n
    d_c = -p.sum(axis=0) / n
    return Gradients(d_w, d_b, d_c)


def cd_from_hidden(
    params: RbmParams,
    batch: np.ndarray,
    hidden: np.ndarray,
    reconstruction: np.ndarray | None = None,
) -> tuple[float, Gradients, np.ndarray]:
    """Contrastive step with the hidden samples (and optionally the
    reconstructions) fixed by the caller.

    Returns (loss, grad, reconstruction) where loss is the mean free-energy
    gap F(v0) - F(v1) over the batch and grad is its parameter gradient with
    the reconstruction treated as constant.
    """
    rows, _ = _vis_rows(batch)
    if rows.shape[0] == 0:
        raise ValueError("batch must be non-empty")
    recon = decode_mean(params, hidden) if reconstruction is None else np.atleast_2d(reconstruction)
    loss = float(np.mean(free_energy(params, rows) - free_energy(params, recon)))
    grad = _free_energy_grad_mean(params, rows) + _free_energy_grad_mean(params, recon).scaled(-1.0)
    return loss, grad, recon


def cd_step(
    params: RbmParams,
    batch: np.ndarray,
    rng: np.random.Generator,
    scaling: EncoderScaling = EncoderScaling.ENERGY_CONSISTENT,
    sample_reconstruction: bool = False,
) -> tuple[float, Gradients]:
    """One contrastive-divergence step (single Gibbs half-cycle) on a batch.

    Hidden patterns are sampled from the encoder at the data points; the
    reconstruction is the decoder mean of those patterns (or a Gaussian
    sample when ``sample_reconstruction`` is set).  The returned loss is the
    mean free-energy gap between data and reconstruction, and the gradient
    treats the reconstruction as constant.
    """
    rows, _ = _vis_rows(batch)
    if rows.shape[0] == 0:
        raise ValueError("batch must be non-empty")
    hidden = sample_hidden(params, rows, rng, scaling)
    recon = sample_visible(params, hidden, rng) if sample_reconstruction else None
    loss, grad, _ = cd_from_hidden(params, rows, hidden, recon)
    return loss, grad


def all_hidden_patterns(m: int) -> np.ndarray:
    """All 2^m binary patterns, row k holding the bits of integer k (bit i = unit i)."""
    codes = np.arange(2**m, dtype=np.int64)
    return ((codes[:, None] >> np.arange(m)) & 1).astype(float)


def _log_partition(params: RbmParams) -> float:
    """log Z by enumerating hidden patterns and integrating v in closed form."""
    from scipy.special import logsumexp

    patterns = all_hidden_patterns(params.m)
    shift = patterns @ params.weights  # (2^m, 2) decoder offsets W^T h
    b = params.vis_bias
    quad_gain = np.sum((b + shift) ** 2 - b**2, axis=1) / (2.0 * params.sigma**2)
    per_pattern = patterns @ params.hid_bias + quad_gain
    return float(np.log(2.0 * np.pi * params.sigma**2) + logsumexp(per_pattern))


def exact_log_likelihood(params: RbmParams, v, max_m: int = 12) -> np.ndarray | float:
    """Exact log p(v) = -F(v) - log Z via hidden-state enumeration.

    Refuses models with more than ``max_m`` hidden units since the partition
    function enumerates all 2^m patterns.
    """
    if params.m > max_m:
        raise ValueError(f"exact likelihood needs m <= {max_m}, got m = {params.m}")
    rows, single = _vis_rows(v)
    log_p = -free_energy(params, rows) - _log_partition(params)
    return float(log_p[0]) if single else log_p
