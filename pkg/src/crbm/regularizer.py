"""Decoder mode geometry: center sets, non-uniformity, and its subgradient.

Every hidden pattern h places a decoder mode at b + W^T h.  Along one
coordinate this gives 2^m mode locations (the center set); the regularizer
pushes the sorted consecutive spacings toward the uniform spacing of the data
range and adds hinge penalties when the extreme centers leave that range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rbm import Gradients, RbmParams, all_hidden_patterns

MAX_ENUMERABLE_M = 20


@dataclass(frozen=True)
class RangeBox:
    """Per-coordinate data range [lo_j, hi_j], j = 1 (x) and 2 (y)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float)
        hi = np.array(self.hi, dtype=float)
        if lo.shape != (2,) or hi.shape != (2,):
            raise ValueError("lo and hi must be 2-vectors")
        if not np.all(hi > lo):
            raise ValueError(f"empty range: lo={lo}, hi={hi}")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @staticmethod
    def from_sample(xy: np.ndarray) -> "RangeBox":
        """Smallest box containing every row of an (n, 2) sample."""
        xy = np.asarray(xy, dtype=float)
        return RangeBox(xy.min(axis=0), xy.max(axis=0))

    def interval(self, j: int) -> tuple[float, float]:
        """(lo, hi) of coordinate j in {1, 2}."""
        _check_coord(j)
        return float(self.lo[j - 1]), float(self.hi[j - 1])

    def swapped(self) -> "RangeBox":
        return RangeBox(self.lo[::-1], self.hi[::-1])


@dataclass(frozen=True)
class CenterSet:
    """All 2^m decoder mode locations along one coordinate plus ascending order.

    ``sort_index`` is a permutation of 0..2^m-1; ties between equal centers
    keep the enumeration order of the hidden patterns (ascending binary value).
    """

    centers: np.ndarray
    sort_index: np.ndarray

    def __post_init__(self):
        c = np.array(self.centers, dtype=float)
        idx = np.array(self.sort_index, dtype=np.int64)
        n = c.shape[0]
        if n == 0 or (n & (n - 1)) != 0:
            raise ValueError(f"center count must be a power of two, got {n}")
        if sorted(idx.tolist()) != list(range(n)):
            raise ValueError("sort_index must be a permutation of 0..2^m-1")
        if np.any(np.diff(c[idx]) < 0):
            raise ValueError("sort_index must order the centers ascending")
        c.setflags(write=False)
        idx.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "sort_index", idx)

    @property
    def sorted_centers(self) -> np.ndarray:
        return self.centers[self.sort_index]


def _check_coord(j: int):
    if j not in (1, 2):
        raise ValueError(f"coordinate index must be 1 or 2, got {j}")


def center_set(params: RbmParams, j: int) -> CenterSet:
    """Enumerate the decoder mode locations b_j + (W^T h)_j over all patterns."""
    _check_coord(j)
    if params.m > MAX_ENUMERABLE_M:
        raise ValueError(f"center enumeration needs m <= {MAX_ENUMERABLE_M}, got m = {params.m}")
    centers = params.vis_bias[j - 1] + all_hidden_patterns(params.m) @ params.weights[:, j - 1]
    return CenterSet(centers, np.argsort(centers, kind="stable"))


def uniform_spacing(cs: CenterSet, range_j: tuple[float, float]) -> float:
    """Target spacing delta = (hi - lo) / 2^m."""
    lo, hi = range_j
    return (hi - lo) / cs.centers.shape[0]


def non_uniformity(cs: CenterSet, range_j: tuple[float, float]) -> float:
    """Sum of squared deviations of consecutive sorted spacings from uniform.

    Zero exactly when every consecutive gap equals (hi - lo) / 2^m; grows as
    the modes cluster or spread unevenly.
    """
    gaps = np.diff(cs.sorted_centers)
    return float(np.sum((gaps - uniform_spacing(cs, range_j)) ** 2))


def boundary_penalty(cs: CenterSet, range_j: tuple[float, float]) -> float:
    """Squared hinge on the extreme centers leaving [lo, hi]."""
    lo, hi = range_j
    s = cs.sorted_centers
    return float(max(0.0, lo - s[0]) ** 2 + max(0.0, s[-1] - hi) ** 2)


def reg_term(params: RbmParams, ranges: RangeBox) -> float:
    """Non-uniformity of both coordinates plus their boundary hinges."""
    total = 0.0
    for j in (1, 2):
        cs = center_set(params, j)
        rj = ranges.interval(j)
        total += non_uniformity(cs, rj) + boundary_penalty(cs, rj)
    return total


def reg_grad(params: RbmParams, ranges: RangeBox) -> Gradients:
    """Gradient of reg_term with respect to W and b.

    The sort permutation is frozen at the current parameters, which makes this
    a subgradient at exact center ties; between ties each center is affine in
    (W, b) so the chain rule is exact.  The hidden bias never enters.
    """
    patterns = all_hidden_patterns(params.m)
    grad = Gradients.zeros(params.m)
    for j in (1, 2):
        cs = center_set(params, j)
        lo, hi = ranges.interval(j)
        order = cs.sort_index
        sorted_c = cs.centers[order]
        residual = np.diff(sorted_c) - uniform_spacing(cs, (lo, hi))

        d_sorted = np.zeros_like(sorted_c)
        d_sorted[1:] += 2.0 * residual
        d_sorted[:-1] -= 2.0 * residual
        d_sorted[0] += -2.0 * max(0.0, lo - sorted_c[0])
        d_sorted[-1] += 2.0 * max(0.0, sorted_c[-1] - hi)

        d_centers = np.zeros_like(d_sorted)
        d_centers[order] = d_sorted
        grad.weights[:, j - 1] = patterns.T @ d_centers
        grad.vis_bias[j - 1] = d_centers.sum()
    return grad
