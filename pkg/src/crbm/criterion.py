"""Causal decision from decoder mode geometry, plus a capacity diagnostic.

The decision statistic is gamma = d(X*) - d(Y*), the difference of the mode
non-uniformities along the two coordinates; negative gamma reads as "x causes
y" since uniform modes in x mean x was the easier variable to model
generically.  Estimation capacity, the area under the pointwise-best decoder
density, is reported as a diagnostic only and never enters the decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .direction import Direction
from .rbm import RbmParams
from .regularizer import RangeBox, center_set, non_uniformity


@dataclass(frozen=True)
class Decision:
    """Signed criterion value and the direction it implies."""

    direction: Direction
    gamma: float
    d_x: float
    d_y: float


@dataclass(frozen=True)
class GridSpec:
    """Integration grid for the capacity diagnostic."""

    lo: float
    hi: float
    nodes: int = 2001

    def __post_init__(self):
        if self.nodes < 1000:
            raise ValueError(f"capacity grid needs >= 1000 nodes, got {self.nodes}")
        if not self.hi > self.lo:
            raise ValueError(f"empty grid: [{self.lo}, {self.hi}]")

    @staticmethod
    def covering(range_j: tuple[float, float], sigma: float, nodes: int = 2001) -> "GridSpec":
        """Grid spanning the data range widened by four decoder widths."""
        lo, hi = range_j
        return GridSpec(lo - 4.0 * sigma, hi + 4.0 * sigma, nodes)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.nodes)


def direction_from_sign(value: float) -> Direction:
    """Negative means x -> y, positive y -> x, exact zero abstains."""
    if value < 0:
        return Direction.X_TO_Y
    if value > 0:
        return Direction.Y_TO_X
    return Direction.UNDECIDED


def gamma(params: RbmParams, ranges: RangeBox) -> Decision:
    """Compare mode non-uniformity along x and y (boundary hinges excluded)."""
    d_x = non_uniformity(center_set(params, 1), ranges.interval(1))
    d_y = non_uniformity(center_set(params, 2), ranges.interval(2))
    g = d_x - d_y
    return Decision(direction_from_sign(g), g, d_x, d_y)


def _ridgeline(u: np.ndarray, centers: np.ndarray, sigma: float) -> np.ndarray:
    """Pointwise max over the equal-width decoder Gaussians (distance to the
    nearest center decides the maximizer)."""
    sc = np.sort(centers)
    pos = np.searchsorted(sc, u)
    left = sc[np.clip(pos - 1, 0, sc.size - 1)]
    right = sc[np.clip(pos, 0, sc.size - 1)]
    dist = np.minimum(np.abs(u - left), np.abs(u - right))
    return np.exp(-0.5 * (dist / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))


def ridgeline_area(centers, sigma: float, grid: GridSpec) -> float:
    """Trapezoidal area under the upper envelope of equal-width Gaussians
    placed at the given centers."""
    u = grid.points
    return float(np.trapezoid(_ridgeline(u, np.asarray(centers, dtype=float), sigma), u))


def estimation_capacity(params: RbmParams, j: int, grid: GridSpec) -> float:
    """Area under the ridgeline of the marginal decoder densities.

    Close to 1 when all modes coincide (one Gaussian of mass one) and grows
    toward the number of well-separated modes as they spread apart.
    """
    return ridgeline_area(center_set(params, j).centers, params.sigma, grid)


def capacity_monotonicity_check(
    params_uniform: RbmParams,
    params_clustered: RbmParams,
    j: int,
    ranges: RangeBox | None = None,
    nodes: int = 4001,
) -> bool:
    """True iff the uniform configuration has at least the clustered capacity.

    Both models must share m and sigma.  When no range box is given, the grid
    spans the union of both center sets widened by four decoder widths.
    """
    if params_uniform.m != params_clustered.m or params_uniform.sigma != params_clustered.sigma:
        raise ValueError("capacity comparison needs matching m and sigma")
    if ranges is not None:
        interval = ranges.interval(j)
    else:
        both = np.concatenate(
            [center_set(params_uniform, j).centers, center_set(params_clustered, j).centers]
        )
        interval = (float(both.min()), float(both.max()))
    grid = GridSpec.covering(interval, params_uniform.sigma, nodes)
    return estimation_capacity(params_uniform, j, grid) >= estimation_capacity(params_clustered, j, grid)
