"""Geometry, channel, and rate model for a waveguide-fed pinching-antenna downlink.

A single dielectric waveguide runs along the x-axis at height ``d`` above the
served region, fed from a point left of all radiating elements.  Each element
contributes a spherical-spreading factor accumulated over its free-space path
plus the guided propagation from the feed, so element phases depend on both
the free-space wavelength and the slower in-guide wavelength.

All quantities are linear scale and SI units (meters, watts, Hz).  Rates are
bits/s/Hz.  Functions accept scalar or ndarray antenna coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact

# Slack when checking the minimum-spacing constraint, absorbs float rounding
# of grid-derived coordinates.
SPACING_TOL = 1e-12

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SystemParams:
    """Static link parameters shared by every placement and rate evaluation."""

    carrier_frequency_hz: float  # f_c
    noise_power_w: float         # sigma_w^2
    waveguide_height_m: float    # d, height of the guide above the user plane
    min_spacing_m: float         # minimum separation between active elements
    region_side_m: float         # D, side of the square served region
    refractive_index: float      # effective index of the guided mode, > 1
    total_power_w: float         # P, transmit power split across elements
    feed_x_m: float              # feed point; must sit left of all elements
    num_antennas: int            # N

    def __post_init__(self) -> None:
        positive = {
            "carrier_frequency_hz": self.carrier_frequency_hz,
            "noise_power_w": self.noise_power_w,
            "waveguide_height_m": self.waveguide_height_m,
            "min_spacing_m": self.min_spacing_m,
            "region_side_m": self.region_side_m,
        }
        for name, value in positive.items():
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        # zero power is allowed so degenerate no-transmit sweeps stay well defined
        if self.total_power_w < 0.0:
            raise ValueError(f"total_power_w must be >= 0, got {self.total_power_w!r}")
        if not self.refractive_index > 1.0:
            raise ValueError(
                f"refractive_index must exceed 1, got {self.refractive_index!r}"
            )
        if self.num_antennas < 1:
            raise ValueError(f"num_antennas must be >= 1, got {self.num_antennas!r}")


def default_params(
    num_antennas: int = 4,
    *,
    carrier_frequency_hz: float = 28e9,
    noise_power_w: float = 1e-12,
    waveguide_height_m: float = 3.0,
    region_side_m: float = 10.0,
    refractive_index: float = 1.4,
    total_power_w: float = 1.0,
    min_spacing_m: float | None = None,
    feed_x_m: float | None = None,
) -> SystemParams:
    """Reference configuration: 28 GHz carrier, -90 dBm noise, 3 m guide height.

    ``min_spacing_m`` defaults to half the free-space wavelength and
    ``feed_x_m`` to one meter left of the served region.
    """
    lam = SPEED_OF_LIGHT / carrier_frequency_hz
    if min_spacing_m is None:
        min_spacing_m = lam / 2.0
    if feed_x_m is None:
        feed_x_m = -region_side_m / 2.0 - 1.0
    return SystemParams(
        carrier_frequency_hz=carrier_frequency_hz,
        noise_power_w=noise_power_w,
        waveguide_height_m=waveguide_height_m,
        min_spacing_m=min_spacing_m,
        region_side_m=region_side_m,
        refractive_index=refractive_index,
        total_power_w=total_power_w,
        feed_x_m=feed_x_m,
        num_antennas=num_antennas,
    )


@dataclass(frozen=True)
class UserPosition:
    """User location on the ground plane (z = 0)."""

    x_m: float
    y_m: float


@dataclass(frozen=True)
class WaveguideLayout:
    """Element x-coordinates along the guide, strictly increasing."""

    antenna_x: tuple[float, ...]
    height_m: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "antenna_x", tuple(float(x) for x in self.antenna_x))
        if len(self.antenna_x) < 1:
            raise ValueError("layout needs at least one element")

    def validate(self, min_spacing_m: float) -> None:
        """Raise ValueError unless coordinates are increasing with feasible gaps."""
        xs = self.antenna_x
        for a, b in zip(xs, xs[1:]):
            if not b > a:
                raise ValueError(f"antenna_x not strictly increasing: {a!r} -> {b!r}")
            if b - a < min_spacing_m - SPACING_TOL:
                raise ValueError(
                    f"spacing {b - a!r} below minimum {min_spacing_m!r}"
                )


@dataclass(frozen=True)
class RateReport:
    """Rate, SNR, and the per-element geometry behind one evaluation.

    ``per_antenna_phase_rad`` holds unreduced accumulated phases; reduce mod
    2*pi only when comparing, the raw values keep full alignment precision.
    """

    rate_bits: float
    snr_linear: float
    per_antenna_distance_m: tuple[float, ...]
    per_antenna_phase_rad: tuple[float, ...]

    @classmethod
    def from_snr(cls, snr, distances, phases) -> "RateReport":
        return cls(
            rate_bits=float(np.log2(1.0 + snr)),
            snr_linear=float(snr),
            per_antenna_distance_m=tuple(float(d) for d in np.atleast_1d(distances)),
            per_antenna_phase_rad=tuple(float(p) for p in np.atleast_1d(phases)),
        )


def wavelength(params: SystemParams) -> float:
    """Free-space wavelength, m."""
    return SPEED_OF_LIGHT / params.carrier_frequency_hz


def guided_wavelength(params: SystemParams) -> float:
    """In-guide wavelength, shorter than free space by the effective index."""
    return wavelength(params) / params.refractive_index


def eta(params: SystemParams) -> float:
    """Free-space power gain coefficient c^2 / (16 pi^2 f_c^2), m^2."""
    c = SPEED_OF_LIGHT
    f = params.carrier_frequency_hz
    return c * c / (16.0 * math.pi**2 * f * f)


def lateral_offset_sq(user: UserPosition, params: SystemParams) -> float:
    """y_m^2 + d^2: squared distance from the user to the guide axis."""
    return user.y_m**2 + params.waveguide_height_m**2


def distance_to_user(user: UserPosition, antenna_x, params: SystemParams):
    """Free-space distance from an element at ``antenna_x`` to the user."""
    return np.sqrt((antenna_x - user.x_m) ** 2 + lateral_offset_sq(user, params))


def total_phase(user: UserPosition, antenna_x, params: SystemParams):
    """Accumulated phase: free-space path plus guided feed-to-element run.

    Returned unreduced; magnitudes reach ~1e4 rad at 28 GHz, where double
    precision still leaves mod-2*pi comparisons good to ~1e-12 rad.
    """
    r = distance_to_user(user, antenna_x, params)
    guided = np.abs(params.feed_x_m - antenna_x)
    return TWO_PI * r / wavelength(params) + TWO_PI * guided / guided_wavelength(params)


def spherical_gain(distance_m, params: SystemParams):
    """Spherical-spreading factor sqrt(eta) * exp(-j 2 pi r / lambda) / r."""
    return (
        math.sqrt(eta(params))
        / distance_m
        * np.exp(-1j * TWO_PI * distance_m / wavelength(params))
    )


def pinching_coefficient(user: UserPosition, antenna_x, params: SystemParams):
    """Channel coefficient of one guide-fed element toward the user."""
    r = distance_to_user(user, antenna_x, params)
    return math.sqrt(eta(params)) / r * np.exp(-1j * total_phase(user, antenna_x, params))


def effective_gain(user: UserPosition, layout: WaveguideLayout, params: SystemParams) -> complex:
    """Coherent sum of element coefficients for one layout."""
    layout.validate(params.min_spacing_m)
    return complex(np.sum(pinching_coefficient(user, np.asarray(layout.antenna_x), params)))


def pinching_rate(user: UserPosition, layout: WaveguideLayout, params: SystemParams) -> RateReport:
    """Achievable rate of the guide-fed array; power splits evenly across elements."""
    layout.validate(params.min_spacing_m)
    xs = np.asarray(layout.antenna_x)
    n = len(layout.antenna_x)
    gain = np.sum(pinching_coefficient(user, xs, params))
    snr = abs(gain) ** 2 * params.total_power_w / (n * params.noise_power_w)
    return RateReport.from_snr(
        snr,
        distance_to_user(user, xs, params),
        total_phase(user, xs, params),
    )


def conventional_channel(
    user: UserPosition,
    antenna_positions: list[tuple[float, float]],
    params: SystemParams,
) -> list[complex]:
    """Free-space channel of a fixed array; positions are (x, height) pairs on y = 0."""
    out = []
    for x, h in antenna_positions:
        r = math.sqrt((x - user.x_m) ** 2 + user.y_m**2 + h * h)
        out.append(complex(spherical_gain(r, params)))
    return out


def conventional_rate(channel: list[complex], params: SystemParams) -> RateReport:
    """Rate of a conventional array under full-power maximum-ratio transmission."""
    norm_sq = sum(abs(h) ** 2 for h in channel)
    snr = params.total_power_w * norm_sq / params.noise_power_w
    root_eta = math.sqrt(eta(params))
    distances = [root_eta / abs(h) if abs(h) > 0.0 else math.inf for h in channel]
    phases = [(-np.angle(h)) % TWO_PI for h in channel]
    return RateReport.from_snr(snr, distances, phases)
