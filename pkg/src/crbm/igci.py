"""Slope- and entropy-based direction estimators with uniform reference.

Both estimators first rescale each series affinely onto [0, 1] and then score
the asymmetry between the two variables: the slope variant compares mean
absolute log-slopes along either sort order, the entropy variant compares
m-spacing differential entropies.  Negative score favors x -> y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .direction import Direction
from .criterion import direction_from_sign


@dataclass(frozen=True)
class IgciScore:
    """Directed scores of both orientations; score = c_xy - c_yx.

    ``degenerate`` flags inputs that left too few usable segments to score
    (constant series, heavy ties); such results are always Undecided.
    """

    c_xy: float
    c_yx: float
    score: float
    direction: Direction
    degenerate: bool = False


def _to_unit_interval(s: np.ndarray) -> np.ndarray:
    """Affine map onto [0, 1]; constant input collapses to zeros."""
    lo, hi = s.min(), s.max()
    if hi == lo:
        return np.zeros_like(s)
    return (s - lo) / (hi - lo)


def _as_series_pair(x, y, min_len: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"series lengths differ: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < min_len:
        raise ValueError(f"need at least {min_len} observations, got {x.shape[0]}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("series must be finite")
    return x, y


def _mean_log_slope(a: np.ndarray, b: np.ndarray) -> tuple[float, int]:
    """Mean of log |db/da| over segments of the a-sorted sequence.

    Segments with zero numerator or denominator are dropped; the mean
    normalizes by the number of segments actually used.
    """
    order = np.argsort(a, kind="stable")
    da = np.diff(a[order])
    db = np.diff(b[order])
    usable = (da != 0) & (db != 0)
    n_used = int(usable.sum())
    if n_used == 0:
        return 0.0, 0
    return float(np.mean(np.log(np.abs(db[usable] / da[usable])))), n_used


def igci_slope(x, y) -> IgciScore:
    """Slope-based estimator: compares mean absolute log-slopes of y over x
    against x over y after rescaling both onto [0, 1]."""
    x, y = _as_series_pair(x, y, min_len=3)
    xs = _to_unit_interval(x)
    ys = _to_unit_interval(y)
    c_xy, used_xy = _mean_log_slope(xs, ys)
    c_yx, used_yx = _mean_log_slope(ys, xs)
    if used_xy < 2 or used_yx < 2:
        return IgciScore(0.0, 0.0, 0.0, Direction.UNDECIDED, degenerate=True)
    score = c_xy - c_yx
    return IgciScore(c_xy, c_yx, score, direction_from_sign(score))


def vasicek_entropy(s: np.ndarray, window: int | None = None) -> float:
    """m-spacing differential entropy estimate of a sample.

    Uses the edge-padded spacing form with window m (default round(sqrt(T)));
    zero spacings from tied values are dropped and the mean renormalized.
    """
    s = np.sort(np.asarray(s, dtype=float).ravel())
    n = s.size
    if window is None:
        window = int(math.floor(math.sqrt(n) + 0.5))
    if not 1 <= window < n / 2:
        raise ValueError(f"window {window} out of range for sample size {n}")
    padded = np.concatenate([np.full(window, s[0]), s, np.full(window, s[-1])])
    gaps = padded[2 * window:] - padded[:-2 * window]
    positive = gaps > 0
    if not positive.any():
        raise ValueError("entropy undefined: all spacings are zero (constant sample)")
    return float(np.mean(np.log(n / (2.0 * window) * gaps[positive])))


def igci_entropy(x, y) -> IgciScore:
    """Entropy-based estimator: the lower-entropy variable (after rescaling
    onto [0, 1]) is read as the effect."""
    x, y = _as_series_pair(x, y, min_len=8)
    if x.max() == x.min() or y.max() == y.min():
        raise ValueError("entropy undefined for a constant series")
    h_x = vasicek_entropy(_to_unit_interval(x))
    h_y = vasicek_entropy(_to_unit_interval(y))
    c_xy = h_y - h_x
    c_yx = -c_xy
    score = c_xy - c_yx
    return IgciScore(c_xy, c_yx, score, direction_from_sign(score))
