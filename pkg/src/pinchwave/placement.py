"""Two-stage placement of guide-fed elements for a single user.

Stage 1 ignores in-guide phase and places the array symmetrically around the
user's x-coordinate at the minimum spacing, which maximizes the sum of
reciprocal element-user distances whenever the user is far enough from the
guide for that sum to be single-peaked.  Stage 2 walks outward from a fixed
anchor element and nudges each remaining element within a small window so its
accumulated phase re-aligns (mod 2*pi) with its inner neighbour, recovering
coherent combining at negligible path-loss cost.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import (
    TWO_PI,
    RateReport,
    SystemParams,
    UserPosition,
    WaveguideLayout,
    guided_wavelength,
    lateral_offset_sq,
    pinching_rate,
    total_phase,
    wavelength,
)


class UnimodalityWarning(UserWarning):
    """Stage-1 closed form used outside its single-peak validity region."""


@dataclass(frozen=True)
class Stage1Solution:
    layout: WaveguideLayout
    objective_value: float      # sum of reciprocal distances at the solution
    condition_satisfied: bool   # single-peak validity of the closed form


@dataclass(frozen=True)
class RefinementConfig:
    """Stage-2 scan resolution and the alignment quality it is expected to hit."""

    search_step_m: float
    phase_tolerance_rad: float = 0.05

    def __post_init__(self) -> None:
        if not self.search_step_m > 0.0:
            raise ValueError(f"search_step_m must be positive, got {self.search_step_m!r}")

    @classmethod
    def for_system(cls, params: SystemParams, step_divisor: float = 200.0) -> "RefinementConfig":
        return cls(search_step_m=wavelength(params) / step_divisor)


@dataclass(frozen=True)
class TwoStageResult:
    stage1: Stage1Solution
    refined_layout: WaveguideLayout
    report: RateReport
    max_phase_gap_rad: float


def reciprocal_distance_sum(x1: float, user: UserPosition, params: SystemParams) -> float:
    """Sum of 1/distance over an equally spaced array whose leftmost element is x1."""
    c_lat = lateral_offset_sq(user, params)
    delta = params.min_spacing_m
    return float(
        sum(
            ((x1 + n * delta - user.x_m) ** 2 + c_lat) ** -0.5
            for n in range(params.num_antennas)
        )
    )


def unimodality_condition(user: UserPosition, params: SystemParams) -> bool:
    """True when the reciprocal-distance sum is single-peaked in x1.

    Holds iff the squared guide-axis offset is at least the squared array
    aperture ((N-1) * spacing)^2.
    """
    aperture = (params.num_antennas - 1) * params.min_spacing_m
    return lateral_offset_sq(user, params) >= aperture * aperture


def stage1_placement(user: UserPosition, params: SystemParams) -> Stage1Solution:
    """Minimum-spacing array centered on the user's x-coordinate."""
    n = params.num_antennas
    delta = params.min_spacing_m
    satisfied = unimodality_condition(user, params)
    if not satisfied:
        warnings.warn(
            "user too close to the guide for the centered closed form to be "
            "provably optimal; continuing with it anyway",
            UnimodalityWarning,
            stacklevel=2,
        )
    xs = tuple(user.x_m + (k - (n - 1) / 2.0) * delta for k in range(n))
    layout = WaveguideLayout(antenna_x=xs, height_m=params.waveguide_height_m)
    return Stage1Solution(
        layout=layout,
        objective_value=reciprocal_distance_sum(xs[0], user, params),
        condition_satisfied=satisfied,
    )


def phase_gap(phi_a: float, phi_b: float) -> float:
    """Circular distance between two phases, in [0, pi]."""
    m = (phi_a - phi_b) % TWO_PI
    return float(np.minimum(m, TWO_PI - m))


def _check_step(cfg: RefinementConfig, params: SystemParams) -> None:
    # Steps coarser than a quarter of the guided wavelength can skip past
    # every alignment point in the scan window.
    limit = guided_wavelength(params) / 4.0
    if cfg.search_step_m >= limit:
        raise ValueError(
            f"search_step_m {cfg.search_step_m!r} must stay below a quarter "
            f"guided wavelength ({limit!r})"
        )


def refine_one(
    prev_x: float,
    direction: int,
    user: UserPosition,
    params: SystemParams,
    cfg: RefinementConfig,
) -> float:
    """Place one element next to an already-fixed neighbour.

    Scans the segment from one to three minimum spacings beyond ``prev_x`` in
    ``direction`` and returns the first sample whose accumulated phase is
    circularly closest to the neighbour's.
    """
    _check_step(cfg, params)
    delta = params.min_spacing_m
    step = cfg.search_step_m
    n_steps = int(math.floor(2.0 * delta / step + 1e-9))
    offsets = delta + step * np.arange(n_steps + 1)
    xs = prev_x + direction * offsets
    phi_prev = total_phase(user, prev_x, params)
    gaps = np.mod(phi_prev - total_phase(user, xs, params), TWO_PI)
    gaps = np.minimum(gaps, TWO_PI - gaps)
    return float(xs[int(np.argmin(gaps))])


def stage2_refine(
    stage1: Stage1Solution,
    user: UserPosition,
    params: SystemParams,
    cfg: RefinementConfig,
) -> WaveguideLayout:
    """Successive outward phase alignment around a fixed anchor element.

    The anchor is the middle element (left-of-middle for even counts); every
    other element is re-placed one at a time moving away from it, so each
    refinement only sees an already-final neighbour.
    """
    _check_step(cfg, params)
    xs = stage1.layout.antenna_x
    n = len(xs)
    if n == 1:
        return stage1.layout
    anchor = (n - 1) // 2
    out: list[float] = [0.0] * n
    out[anchor] = xs[anchor]
    for i in range(anchor + 1, n):
        out[i] = refine_one(out[i - 1], +1, user, params, cfg)
    for i in range(anchor - 1, -1, -1):
        out[i] = refine_one(out[i + 1], -1, user, params, cfg)
    return WaveguideLayout(antenna_x=tuple(out), height_m=params.waveguide_height_m)


def _max_consecutive_gap(user: UserPosition, layout: WaveguideLayout, params: SystemParams) -> float:
    xs = layout.antenna_x
    if len(xs) == 1:
        return 0.0
    phis = [float(total_phase(user, x, params)) for x in xs]
    return max(phase_gap(a, b) for a, b in zip(phis, phis[1:]))


def two_stage_optimize(
    user: UserPosition,
    params: SystemParams,
    cfg: RefinementConfig | None = None,
) -> TwoStageResult:
    """Closed-form placement followed by guarded phase refinement.

    The refined layout is kept only when it does not lose rate against the
    stage-1 layout, so the result never degrades the closed form.
    """
    if cfg is None:
        cfg = RefinementConfig.for_system(params)
    stage1 = stage1_placement(user, params)
    refined = stage2_refine(stage1, user, params, cfg)
    report_s1 = pinching_rate(user, stage1.layout, params)
    report_ref = pinching_rate(user, refined, params)
    if report_ref.rate_bits >= report_s1.rate_bits:
        chosen, report = refined, report_ref
    else:
        chosen, report = stage1.layout, report_s1
    return TwoStageResult(
        stage1=stage1,
        refined_layout=chosen,
        report=report,
        max_phase_gap_rad=_max_consecutive_gap(user, chosen, params),
    )
