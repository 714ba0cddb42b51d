import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pinchwave.model import (
    UserPosition,
    WaveguideLayout,
    default_params,
    guided_wavelength,
    lateral_offset_sq,
    pinching_rate,
    total_phase,
    wavelength,
)
from pinchwave.placement import (
    RefinementConfig,
    UnimodalityWarning,
    phase_gap,
    reciprocal_distance_sum,
    refine_one,
    stage1_placement,
    stage2_refine,
    two_stage_optimize,
    unimodality_condition,
)
from pinchwave.verification import (
    alignment_bound_check,
    equal_spacing_check,
    single_peak_check,
)

TWO_PI = 2.0 * math.pi


def lipschitz_bound(params, step):
    # phase changes along the guide at most 2 pi (1/lambda + 1/lambda_guided) per meter
    return TWO_PI * step * (1.0 / wavelength(params) + 1.0 / guided_wavelength(params))


# --- reciprocal-distance objective ----------------------------------------------

def test_reciprocal_sum_single_element():
    p = default_params(num_antennas=1)
    user = UserPosition(2.0, 1.0)
    expected = 1.0 / math.sqrt(lateral_offset_sq(user, p))
    assert reciprocal_distance_sum(2.0, user, p) == pytest.approx(expected, rel=1e-12)


def test_reciprocal_sum_frozen_three_element():
    # element offsets -1, 0, 1 around the user, squared axis offset 100:
    # 2/sqrt(101) + 1/10, frozen by direct evaluation
    p = default_params(num_antennas=3, waveguide_height_m=10.0, min_spacing_m=1.0)
    user = UserPosition(0.0, 0.0)
    assert reciprocal_distance_sum(-1.0, user, p) == pytest.approx(
        0.2990074380419978, rel=1e-12
    )


@given(
    t=st.floats(min_value=-0.5, max_value=0.5),
    x_m=st.floats(min_value=-5.0, max_value=5.0),
    y_m=st.floats(min_value=-5.0, max_value=5.0),
)
@settings(max_examples=60)
def test_reciprocal_sum_symmetric_around_centered_start(t, x_m, y_m):
    p = default_params(num_antennas=5)
    user = UserPosition(x_m, y_m)
    x1_star = x_m - (p.num_antennas - 1) / 2.0 * p.min_spacing_m
    left = reciprocal_distance_sum(x1_star - t, user, p)
    right = reciprocal_distance_sum(x1_star + t, user, p)
    assert left == pytest.approx(right, rel=1e-9)


def _analytic_slope(x1, user, params):
    c_lat = lateral_offset_sq(user, params)
    total = 0.0
    for k in range(params.num_antennas):
        u = x1 + k * params.min_spacing_m - user.x_m
        total -= u * (u * u + c_lat) ** -1.5
    return total


@given(t=st.floats(min_value=1e-4, max_value=0.5))
@settings(max_examples=40)
def test_reciprocal_sum_slope_antisymmetric(t):
    p = default_params(num_antennas=4)
    user = UserPosition(1.0, 2.0)
    x1_star = user.x_m - (p.num_antennas - 1) / 2.0 * p.min_spacing_m
    a = _analytic_slope(x1_star + t, user, p)
    b = _analytic_slope(x1_star - t, user, p)
    assert a == pytest.approx(-b, rel=1e-9, abs=1e-15)


# --- validity condition ----------------------------------------------------------

def test_condition_single_element_always_holds():
    p = default_params(num_antennas=1, waveguide_height_m=0.001)
    assert unimodality_condition(UserPosition(0.0, 0.0), p)


def test_condition_boundary_inclusive():
    # squared axis offset exactly equals squared aperture
    p = default_params(num_antennas=3, waveguide_height_m=2.0, min_spacing_m=1.0)
    assert unimodality_condition(UserPosition(0.0, 0.0), p)
    p_tight = default_params(num_antennas=3, waveguide_height_m=1.999, min_spacing_m=1.0)
    assert not unimodality_condition(UserPosition(0.0, 0.0), p_tight)


def test_condition_holds_for_defaults():
    p = default_params(num_antennas=8)
    assert unimodality_condition(UserPosition(0.0, 0.0), p)


# --- stage 1 ----------------------------------------------------------------------

def test_stage1_single_element_at_user():
    p = default_params(num_antennas=1)
    sol = stage1_placement(UserPosition(2.5, -1.0), p)
    assert sol.layout.antenna_x == (2.5,)


def test_stage1_three_elements_centered():
    p = default_params(num_antennas=3, min_spacing_m=0.005)
    sol = stage1_placement(UserPosition(5.0, 1.0), p)
    assert sol.layout.antenna_x == pytest.approx((4.995, 5.0, 5.005), abs=1e-15)


def test_stage1_two_elements_straddle():
    p = default_params(num_antennas=2, waveguide_height_m=10.0, min_spacing_m=1.0)
    sol = stage1_placement(UserPosition(0.0, 0.0), p)
    assert sol.layout.antenna_x == pytest.approx((-0.5, 0.5), abs=1e-15)


def test_stage1_objective_matches_sum():
    p = default_params(num_antennas=4)
    user = UserPosition(-2.0, 3.0)
    sol = stage1_placement(user, p)
    assert sol.objective_value == pytest.approx(
        reciprocal_distance_sum(sol.layout.antenna_x[0], user, p), rel=1e-12
    )
    assert sol.condition_satisfied


def test_stage1_warns_when_condition_violated():
    p = default_params(num_antennas=8, waveguide_height_m=0.01, min_spacing_m=1.0)
    with pytest.warns(UnimodalityWarning):
        sol = stage1_placement(UserPosition(0.0, 0.0), p)
    assert not sol.condition_satisfied
    # layout is still the centered closed form
    assert sol.layout.antenna_x[0] == pytest.approx(-3.5, abs=1e-12)


def test_stage1_layout_feasible():
    p = default_params(num_antennas=16)
    sol = stage1_placement(UserPosition(3.3, -2.1), p)
    sol.layout.validate(p.min_spacing_m)


# --- circular phase distance ------------------------------------------------------

def test_phase_gap_examples():
    assert phase_gap(0.3, 0.0) == pytest.approx(0.3, abs=1e-12)
    assert phase_gap(0.0, 0.3) == pytest.approx(0.3, abs=1e-12)
    assert phase_gap(TWO_PI - 0.3, 0.0) == pytest.approx(0.3, abs=1e-12)
    assert phase_gap(math.pi, 0.0) == pytest.approx(math.pi, abs=1e-12)
    assert phase_gap(TWO_PI * 7 + 0.3, 0.0) == pytest.approx(0.3, abs=1e-9)


@given(a=st.floats(min_value=-100.0, max_value=100.0), b=st.floats(min_value=-100.0, max_value=100.0))
def test_phase_gap_symmetric_and_bounded(a, b):
    g = phase_gap(a, b)
    assert 0.0 <= g <= math.pi + 1e-12
    assert g == pytest.approx(phase_gap(b, a), abs=1e-9)


# --- stage 2 ----------------------------------------------------------------------

def test_refine_one_stays_in_segment():
    p = default_params()
    cfg = RefinementConfig.for_system(p)
    rng = np.random.default_rng(5)
    delta = p.min_spacing_m
    for _ in range(25):
        user = UserPosition(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
        prev = user.x_m + float(rng.uniform(-2, 2)) * delta
        for direction in (+1, -1):
            x = refine_one(prev, direction, user, p, cfg)
            off = (x - prev) * direction
            assert delta - 1e-12 <= off <= 3.0 * delta + 1e-12


def test_refine_one_meets_fine_scan_oracle():
    # a 100x finer scan bounds how much alignment the default step can miss
    p = default_params()
    cfg = RefinementConfig.for_system(p)
    fine = RefinementConfig.for_system(p, step_divisor=20000.0)
    rng = np.random.default_rng(11)
    for _ in range(15):
        user = UserPosition(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
        prev = user.x_m - p.min_spacing_m / 2.0
        phi_prev = float(total_phase(user, prev, p))
        x = refine_one(prev, +1, user, p, cfg)
        x_fine = refine_one(prev, +1, user, p, fine)
        gap = phase_gap(phi_prev, float(total_phase(user, x, p)))
        gap_fine = phase_gap(phi_prev, float(total_phase(user, x_fine, p)))
        assert gap < 0.05
        assert gap <= gap_fine + lipschitz_bound(p, cfg.search_step_m) + 1e-9


def test_refine_rejects_coarse_step():
    p = default_params()
    cfg = RefinementConfig(search_step_m=guided_wavelength(p))  # way past a quarter cycle
    with pytest.raises(ValueError):
        refine_one(0.0, +1, UserPosition(0.0, 0.0), p, cfg)


def test_stage2_single_element_unchanged():
    p = default_params(num_antennas=1)
    sol = stage1_placement(UserPosition(1.0, 1.0), p)
    refined = stage2_refine(sol, UserPosition(1.0, 1.0), p, RefinementConfig.for_system(p))
    assert refined.antenna_x == sol.layout.antenna_x


def test_stage2_anchor_odd_stays_on_user():
    p = default_params(num_antennas=3)
    user = UserPosition(2.0, 1.0)
    refined = stage2_refine(stage1_placement(user, p), user, p, RefinementConfig.for_system(p))
    assert refined.antenna_x[1] == user.x_m


def test_stage2_anchor_even_stays_half_spacing_left():
    p = default_params(num_antennas=4)
    user = UserPosition(2.0, 1.0)
    refined = stage2_refine(stage1_placement(user, p), user, p, RefinementConfig.for_system(p))
    assert refined.antenna_x[1] == pytest.approx(user.x_m - p.min_spacing_m / 2.0, abs=1e-15)


def test_stage2_neighbours_within_segments():
    p = default_params(num_antennas=6)
    user = UserPosition(-3.0, 2.5)
    refined = stage2_refine(stage1_placement(user, p), user, p, RefinementConfig.for_system(p))
    delta = p.min_spacing_m
    xs = refined.antenna_x
    for a, b in zip(xs, xs[1:]):
        assert delta - 1e-12 <= b - a <= 3.0 * delta + 1e-12
    refined.validate(p.min_spacing_m)


@given(
    n=st.integers(min_value=2, max_value=16),
    x_m=st.floats(min_value=-5.0, max_value=5.0),
    y_m=st.floats(min_value=-5.0, max_value=5.0),
)
@settings(max_examples=40, deadline=None)
def test_stage2_output_ordered_and_feasible(n, x_m, y_m):
    p = default_params(num_antennas=n)
    user = UserPosition(x_m, y_m)
    refined = stage2_refine(stage1_placement(user, p), user, p, RefinementConfig.for_system(p))
    refined.validate(p.min_spacing_m)
    assert len(refined.antenna_x) == n


def test_stage2_alignment_tolerance_on_random_users():
    p4 = default_params(num_antennas=4)
    p7 = default_params(num_antennas=7)
    rng = np.random.default_rng(17)
    for params in (p4, p7):
        cfg = RefinementConfig.for_system(params)
        for _ in range(50):
            user = UserPosition(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
            refined = stage2_refine(stage1_placement(user, params), user, params, cfg)
            phis = [float(total_phase(user, x, params)) for x in refined.antenna_x]
            worst = max(phase_gap(a, b) for a, b in zip(phis, phis[1:]))
            assert worst <= cfg.phase_tolerance_rad


# --- two-stage wrapper --------------------------------------------------------------

def test_two_stage_single_element():
    p = default_params(num_antennas=1)
    res = two_stage_optimize(UserPosition(0.5, 0.5), p)
    assert res.refined_layout.antenna_x == res.stage1.layout.antenna_x
    assert res.max_phase_gap_rad == 0.0


def test_two_stage_never_below_stage1():
    rng = np.random.default_rng(23)
    for n in (2, 3, 5, 8):
        p = default_params(num_antennas=n)
        for _ in range(10):
            user = UserPosition(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
            res = two_stage_optimize(user, p)
            s1_rate = pinching_rate(user, res.stage1.layout, p).rate_bits
            assert res.report.rate_bits >= s1_rate - 1e-12


def test_two_stage_report_matches_layout():
    p = default_params(num_antennas=5)
    user = UserPosition(1.7, -0.4)
    res = two_stage_optimize(user, p)
    again = pinching_rate(user, res.refined_layout, p)
    assert res.report.rate_bits == pytest.approx(again.rate_bits, rel=1e-14)
    assert res.max_phase_gap_rad <= RefinementConfig.for_system(p).phase_tolerance_rad


def test_two_stage_custom_step_divisor():
    p = default_params(num_antennas=4)
    user = UserPosition(2.0, 1.5)
    coarse = two_stage_optimize(user, p, RefinementConfig.for_system(p, step_divisor=40.0))
    fine = two_stage_optimize(user, p, RefinementConfig.for_system(p, step_divisor=400.0))
    assert fine.max_phase_gap_rad <= lipschitz_bound(p, wavelength(p) / 400.0) + 1e-9
    assert coarse.report.rate_bits <= fine.report.rate_bits + 1e-6


# --- shared verification suites ------------------------------------------------------

def test_equal_spacing_check_passes():
    res = equal_spacing_check(seed=1, cases=6)
    assert res.passed, res.detail


def test_single_peak_check_passes():
    res = single_peak_check(seed=1, cases=10)
    assert res.passed, res.detail


def test_alignment_bound_check_passes():
    res = alignment_bound_check(seed=1, cases=12)
    assert res.passed, res.detail
