"""Center-set geometry, the non-uniformity measure, and its subgradient."""

import numpy as np
import pytest

from crbm.rbm import RbmParams
from crbm.regularizer import (
    CenterSet,
    RangeBox,
    boundary_penalty,
    center_set,
    non_uniformity,
    reg_grad,
    reg_term,
    uniform_spacing,
)


def params_for_centers_m1(w, b_j=0.0):
    """m=1 model whose x-centers are {b_j, b_j + w}."""
    return RbmParams(np.array([[w, 0.0]]), np.array([b_j, 0.0]), np.zeros(1), 1.0)


def uniform_grid_params(m, lo, hi):
    """Weights whose subset sums tile [lo, hi] uniformly on both coordinates.

    Binary weights w_i = span * 2^i / 2^m place the 2^m centers exactly at
    lo + span * k / 2^m for k = 0..2^m-1, which has constant spacing.
    """
    span = hi - lo
    w = np.array([[span * 2**i / 2**m] * 2 for i in range(m)])
    return RbmParams(w, np.array([lo, lo]), np.zeros(m), 1.0)


def fd_reg_grad(params, ranges, eps=1e-6):
    m = params.m
    gw = np.zeros((m, 2))
    gb = np.zeros(2)
    for i in range(m):
        for j in range(2):
            w_up, w_dn = params.weights.copy(), params.weights.copy()
            w_up[i, j] += eps
            w_dn[i, j] -= eps
            up = reg_term(RbmParams(w_up, params.vis_bias, params.hid_bias, params.sigma), ranges)
            dn = reg_term(RbmParams(w_dn, params.vis_bias, params.hid_bias, params.sigma), ranges)
            gw[i, j] = (up - dn) / (2 * eps)
    for j in range(2):
        b_up, b_dn = params.vis_bias.copy(), params.vis_bias.copy()
        b_up[j] += eps
        b_dn[j] -= eps
        up = reg_term(RbmParams(params.weights, b_up, params.hid_bias, params.sigma), ranges)
        dn = reg_term(RbmParams(params.weights, b_dn, params.hid_bias, params.sigma), ranges)
        gb[j] = (up - dn) / (2 * eps)
    return gw, gb


def min_center_gap(params):
    gaps = []
    for j in (1, 2):
        s = center_set(params, j).sorted_centers
        gaps.append(np.diff(s).min())
    return min(gaps)


class TestCenterSet:
    def test_m1_two_centers(self):
        cs = center_set(params_for_centers_m1(0.8), 1)
        assert np.allclose(np.sort(cs.centers), [0.0, 0.8])

    def test_m5_has_32_centers(self):
        rng = np.random.default_rng(1)
        p = RbmParams(rng.standard_normal((5, 2)), rng.standard_normal(2), np.zeros(5), 1.0)
        for j in (1, 2):
            cs = center_set(p, j)
            assert cs.centers.shape == (32,)
            assert sorted(cs.sort_index.tolist()) == list(range(32))

    def test_m2_hand_enumeration(self):
        p = RbmParams(np.array([[1.0, 0.0], [2.0, 0.0]]), np.zeros(2), np.zeros(2), 1.0)
        cs = center_set(p, 1)
        assert np.allclose(cs.sorted_centers, [0.0, 1.0, 2.0, 3.0])

    def test_ties_keep_pattern_enumeration_order(self):
        # first hidden unit contributes nothing: centers come in tied pairs
        p = RbmParams(np.array([[0.0, 0.0], [1.5, 0.0]]), np.zeros(2), np.zeros(2), 1.0)
        cs = center_set(p, 1)
        assert np.allclose(cs.sorted_centers, [0.0, 0.0, 1.5, 1.5])
        assert cs.sort_index.tolist() == [0, 1, 2, 3]

    def test_sorted_ascending_random(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            p = RbmParams(rng.standard_normal((4, 2)), rng.standard_normal(2), np.zeros(4), 1.0)
            cs = center_set(p, int(rng.integers(1, 3)))
            assert np.all(np.diff(cs.sorted_centers) >= 0)

    def test_refuses_huge_m(self):
        p = RbmParams(np.zeros((21, 2)), np.zeros(2), np.zeros(21), 1.0)
        with pytest.raises(ValueError, match="m <= 20"):
            center_set(p, 1)

    def test_bad_coordinate(self):
        p = params_for_centers_m1(1.0)
        with pytest.raises(ValueError):
            center_set(p, 3)


class TestNonUniformity:
    def test_uniform_grid_is_zero(self):
        for m in (1, 2, 4):
            p = uniform_grid_params(m, -1.0, 1.0)
            cs = center_set(p, 1)
            assert non_uniformity(cs, (-1.0, 1.0)) == pytest.approx(0.0, abs=1e-24)

    def test_hand_value_quarter(self):
        # centers {0, 1} on [0, 1]: delta = 1/2, single gap residual 1/2
        cs = center_set(params_for_centers_m1(1.0), 1)
        assert non_uniformity(cs, (0.0, 1.0)) == pytest.approx(0.25)

    def test_coincident_centers(self):
        p = RbmParams(np.zeros((2, 2)), np.zeros(2), np.zeros(2), 1.0)
        cs = center_set(p, 1)
        delta = uniform_spacing(cs, (0.0, 2.0))
        assert non_uniformity(cs, (0.0, 2.0)) == pytest.approx(3 * delta**2)

    def test_translation_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            centers = rng.standard_normal(8)
            cs = CenterSet(centers, np.argsort(centers, kind="stable"))
            shifted = CenterSet(centers + 5.5, np.argsort(centers, kind="stable"))
            r = (-2.0, 2.0)
            assert non_uniformity(shifted, r) == pytest.approx(non_uniformity(cs, r), rel=1e-12)

    def test_zero_iff_uniform(self):
        p = uniform_grid_params(3, 0.0, 4.0)
        assert non_uniformity(center_set(p, 1), (0.0, 4.0)) == 0.0
        w = p.weights.copy()
        w[0, 0] += 0.01  # perturb one subset sum
        bumped = RbmParams(w, p.vis_bias, p.hid_bias, p.sigma)
        assert non_uniformity(center_set(bumped, 1), (0.0, 4.0)) > 0.0

    def test_nonnegative(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            centers = rng.standard_normal(16) * rng.uniform(0.1, 3)
            cs = CenterSet(centers, np.argsort(centers, kind="stable"))
            assert non_uniformity(cs, (-1.0, 1.0)) >= 0.0


class TestBoundaryPenalty:
    def test_inside_is_zero(self):
        cs = center_set(params_for_centers_m1(0.5, b_j=0.2), 1)
        assert boundary_penalty(cs, (0.0, 1.0)) == 0.0

    def test_low_end_violation(self):
        # centers {-0.3, 0.2}: lower end undershoots [0, 1] by 0.3
        cs = center_set(params_for_centers_m1(0.5, b_j=-0.3), 1)
        assert boundary_penalty(cs, (0.0, 1.0)) == pytest.approx(0.09)

    def test_both_ends_violated(self):
        # centers {-0.1, 1.1} against [0, 1]
        cs = center_set(params_for_centers_m1(1.2, b_j=-0.1), 1)
        assert boundary_penalty(cs, (0.0, 1.0)) == pytest.approx(0.02)


class TestRegTerm:
    def test_uniform_grids_inside_ranges(self):
        p = uniform_grid_params(3, -1.0, 1.0)
        ranges = RangeBox(np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
        assert reg_term(p, ranges) == pytest.approx(0.0, abs=1e-24)

    def test_coordinate_swap_invariance_of_symmetric_model(self):
        rng = np.random.default_rng(5)
        w_col = rng.standard_normal(4)
        p = RbmParams(np.column_stack([w_col, w_col]), np.array([0.3, 0.3]), np.zeros(4), 1.0)
        ranges = RangeBox(np.array([-2.0, -2.0]), np.array([2.0, 2.0]))
        swapped = RbmParams(p.weights[:, ::-1], p.vis_bias[::-1], p.hid_bias, p.sigma)
        assert reg_term(swapped, ranges.swapped()) == reg_term(p, ranges)

    def test_equals_nonuniformity_sum_when_inside(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            p = RbmParams(0.1 * rng.standard_normal((3, 2)), np.zeros(2), np.zeros(3), 1.0)
            ranges = RangeBox(np.array([-5.0, -5.0]), np.array([5.0, 5.0]))
            expected = sum(
                non_uniformity(center_set(p, j), ranges.interval(j)) for j in (1, 2)
            )
            assert reg_term(p, ranges) == pytest.approx(expected, rel=1e-12)

    def test_swap_equivariance_of_d_values(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = RbmParams(rng.standard_normal((4, 2)), rng.standard_normal(2), np.zeros(4), 1.0)
            ranges = RangeBox(np.array([-2.0, -1.0]), np.array([1.0, 3.0]))
            swapped = RbmParams(p.weights[:, ::-1], p.vis_bias[::-1], p.hid_bias, p.sigma)
            d_x = non_uniformity(center_set(p, 1), ranges.interval(1))
            d_y = non_uniformity(center_set(p, 2), ranges.interval(2))
            d_x_sw = non_uniformity(center_set(swapped, 1), ranges.swapped().interval(1))
            d_y_sw = non_uniformity(center_set(swapped, 2), ranges.swapped().interval(2))
            assert d_x_sw == d_y and d_y_sw == d_x


class TestRegGrad:
    def test_zero_at_uniform_grid(self):
        p = uniform_grid_params(3, -1.0, 1.0)
        ranges = RangeBox(np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
        g = reg_grad(p, ranges)
        assert g.max_abs() == pytest.approx(0.0, abs=1e-12)
        assert np.all(g.hid_bias == 0)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(8)
        ranges = RangeBox(np.array([-1.5, -2.0]), np.array([2.0, 1.5]))
        checked = 0
        worst = 0.0
        while checked < 100:
            m = int(rng.integers(1, 6))
            p = RbmParams(rng.standard_normal((m, 2)), rng.standard_normal(2), np.zeros(m), 1.0)
            if min_center_gap(p) < 1e-3:  # stay away from sort ties
                continue
            checked += 1
            g = reg_grad(p, ranges)
            fw, fb = fd_reg_grad(p, ranges)
            ref = max(np.abs(fw).max(), np.abs(fb).max(), 1e-8)
            denom_w = np.maximum(np.abs(fw), 1e-3 * ref)
            denom_b = np.maximum(np.abs(fb), 1e-3 * ref)
            worst = max(
                worst,
                float(np.max(np.abs(g.weights - fw) / denom_w)),
                float(np.max(np.abs(g.vis_bias - fb) / denom_b)),
            )
        assert worst <= 1e-5

    def test_bias_gradient_vanishes_when_inside_range(self):
        # spacings are translation invariant, so with inactive hinges the
        # visible bias feels no pull
        rng = np.random.default_rng(9)
        for _ in range(20):
            p = RbmParams(0.2 * rng.standard_normal((4, 2)), 0.1 * rng.standard_normal(2),
                          np.zeros(4), 1.0)
            ranges = RangeBox(np.array([-10.0, -10.0]), np.array([10.0, 10.0]))
            g = reg_grad(p, ranges)
            assert np.all(np.abs(g.vis_bias) <= 1e-12)


class TestRangeBox:
    def test_rejects_empty_range(self):
        with pytest.raises(ValueError):
            RangeBox(np.array([0.0, 0.0]), np.array([1.0, 0.0]))

    def test_from_sample(self):
        xy = np.array([[0.0, 5.0], [2.0, -1.0], [1.0, 2.0]])
        rb = RangeBox.from_sample(xy)
        assert rb.interval(1) == (0.0, 2.0)
        assert rb.interval(2) == (-1.0, 5.0)
