"""Comparison systems: fixed array, movable array on a short track, and an
exhaustive-search reference for the guide-fed placement itself."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    RateReport,
    SystemParams,
    UserPosition,
    WaveguideLayout,
    conventional_rate,
    eta,
    pinching_coefficient,
    pinching_rate,
    spherical_gain,
    wavelength,
)


def conventional_array(params: SystemParams) -> list[tuple[float, float]]:
    """Fixed array at minimum spacing centered on the region centroid.

    Returns (x, height) pairs on the y = 0 line.
    """
    n = params.num_antennas
    delta = params.min_spacing_m
    h = params.waveguide_height_m
    return [((k - (n - 1) / 2.0) * delta, h) for k in range(n)]


@dataclass(frozen=True)
class MovableTrack:
    """Straight track parallel to the y-axis, midpoint above the region centroid.

    The element block spans (N-1) spacings, leaving exactly
    ``max_excursion_m`` of total travel however many elements are mounted.
    """

    length_m: float
    max_excursion_m: float

    @classmethod
    def for_system(cls, params: SystemParams) -> "MovableTrack":
        delta = params.min_spacing_m
        return cls(
            length_m=(params.num_antennas + 9) * delta,
            max_excursion_m=10.0 * delta,
        )


def _movable_norm_sq(centers: np.ndarray, offsets: np.ndarray, user: UserPosition, params: SystemParams) -> np.ndarray:
    # ||h||^2 for each candidate block center; elements sit at (0, c + offset, d)
    y = centers[:, None] + offsets[None, :]
    r_sq = user.x_m**2 + (y - user.y_m) ** 2 + params.waveguide_height_m**2
    return eta(params) * np.sum(1.0 / r_sq, axis=1)


def movable_optimize(user: UserPosition, params: SystemParams) -> RateReport:
    """Best rate of an equally spaced block sliding along the movable track.

    The channel magnitude depends only on element-user distances, so the
    block stays at minimum spacing and its center slides toward the user's
    y-coordinate, clamped to the track; a grid pass at a twentieth of the
    spacing guards the clamped cases.
    """
    n = params.num_antennas
    delta = params.min_spacing_m
    track = MovableTrack.for_system(params)
    half_slack = (track.length_m - (n - 1) * delta) / 2.0  # == max_excursion / 2
    offsets = (np.arange(n) - (n - 1) / 2.0) * delta
    clamped = min(max(user.y_m, -half_slack), half_slack)
    grid = np.arange(-half_slack, half_slack + delta / 40.0, delta / 20.0)
    centers = np.concatenate(([clamped], grid))
    scores = _movable_norm_sq(centers, offsets, user, params)
    center = float(centers[int(np.argmax(scores))])
    d = params.waveguide_height_m
    channel = [
        complex(spherical_gain(math.sqrt(user.x_m**2 + (center + o - user.y_m) ** 2 + d * d), params))
        for o in offsets
    ]
    return conventional_rate(channel, params)


@dataclass(frozen=True)
class OracleConfig:
    """Grid resolution and search window of the exhaustive placement search."""

    step_m: float
    window_halfwidth_m: float
    full_span: bool = False  # search the whole served span instead of a user-centered window

    def __post_init__(self) -> None:
        if not self.step_m > 0.0:
            raise ValueError(f"step_m must be positive, got {self.step_m!r}")
        if not self.window_halfwidth_m > 0.0:
            raise ValueError(
                f"window_halfwidth_m must be positive, got {self.window_halfwidth_m!r}"
            )

    @classmethod
    def for_system(
        cls,
        params: SystemParams,
        step_divisor: float = 50.0,
        window_wavelengths: float = 5.0,
        full_span: bool = False,
    ) -> "OracleConfig":
        lam = wavelength(params)
        return cls(
            step_m=lam / step_divisor,
            window_halfwidth_m=window_wavelengths * lam,
            full_span=full_span,
        )


def exhaustive_search(
    user: UserPosition,
    params: SystemParams,
    cfg: OracleConfig | None = None,
) -> tuple[WaveguideLayout, RateReport]:
    """Grid-exhaustive placement over a window around the user.

    Enumerates every feasible element tuple on the grid in lexicographic
    order and keeps the first rate maximizer.  Cost grows as grid^N, so
    element counts above 3 are refused outright.
    """
    n = params.num_antennas
    if n > 3:
        raise ValueError(
            f"exhaustive search is limited to 3 elements, got {n}; "
            "use the two-stage placement instead"
        )
    if cfg is None:
        cfg = OracleConfig.for_system(params)
    lam = wavelength(params)
    if cfg.step_m > lam / 50.0 * (1.0 + 1e-9):
        raise ValueError(
            f"step_m {cfg.step_m!r} coarser than a fiftieth of a wavelength ({lam / 50.0!r})"
        )
    if cfg.full_span:
        lo, hi = -params.region_side_m / 2.0, params.region_side_m / 2.0
    else:
        lo = user.x_m - cfg.window_halfwidth_m
        hi = user.x_m + cfg.window_halfwidth_m
    count = int(math.floor((hi - lo) / cfg.step_m + 1e-9)) + 1
    points = lo + cfg.step_m * np.arange(count)
    sep = int(math.ceil(params.min_spacing_m / cfg.step_m - 1e-9))
    if (n - 1) * sep >= count:
        raise ValueError("search window too narrow for the requested element count")

    coeffs = pinching_coefficient(user, points, params)
    best_val = -math.inf
    best_idx: tuple[int, ...] = ()
    if n == 1:
        mags = np.abs(coeffs)
        i = int(np.argmax(mags))
        best_idx = (i,)
    elif n == 2:
        for i in range(count - sep):
            mags = np.abs(coeffs[i] + coeffs[i + sep :])
            j = int(np.argmax(mags))
            if mags[j] > best_val:
                best_val = float(mags[j])
                best_idx = (i, i + sep + j)
    else:
        for i in range(count - 2 * sep):
            for j in range(i + sep, count - sep):
                mags = np.abs(coeffs[i] + coeffs[j] + coeffs[j + sep :])
                k = int(np.argmax(mags))
                if mags[k] > best_val:
                    best_val = float(mags[k])
                    best_idx = (i, j, j + sep + k)
    layout = WaveguideLayout(
        antenna_x=tuple(float(points[i]) for i in best_idx),
        height_m=params.waveguide_height_m,
    )
    return layout, pinching_rate(user, layout, params)
