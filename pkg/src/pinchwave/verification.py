"""Self-checks for the placement math, runnable from the CLI or the tests.

Each check draws its own scenarios from an explicit seed and returns a
structured verdict, so a failure can be replayed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import TWO_PI, UserPosition, default_params, guided_wavelength, total_phase, wavelength
from .placement import (
    RefinementConfig,
    phase_gap,
    reciprocal_distance_sum,
    stage1_placement,
    stage2_refine,
    unimodality_condition,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    seed: int
    detail: str = ""


def _grid_argmax_layout(q: np.ndarray, n: int, sep: int) -> tuple[int, ...]:
    """Exact maximizer of q[i1] + ... + q[in] over i1 < i2 < ... with gaps >= sep.

    The objective is separable, so suffix maxima reproduce the full
    enumeration result at linear cost.  chains[k] holds, for every start
    index m, the best placement of k+1 elements at indices >= m.
    """
    count = len(q)
    chains: list[tuple[np.ndarray, np.ndarray]] = []
    level_val = q.astype(float)
    for _ in range(n):
        best_val = np.empty(count)
        best_arg = np.empty(count, dtype=int)
        running, running_arg = -np.inf, -1
        for m in range(count - 1, -1, -1):
            if level_val[m] > running:
                running, running_arg = float(level_val[m]), m
            best_val[m] = running
            best_arg[m] = running_arg
        chains.append((best_val, best_arg))
        level_val = np.full(count, -np.inf)
        if count > sep:
            level_val[: count - sep] = q[: count - sep] + best_val[sep:]
    idx = [int(chains[-1][1][0])]
    for level in range(n - 2, -1, -1):
        idx.append(int(chains[level][1][idx[-1] + sep]))
    return tuple(idx)


def equal_spacing_check(seed: int = 0, cases: int = 20) -> CheckResult:
    """Brute-force grid maximizer of the reciprocal-distance sum keeps every
    consecutive gap within one grid step of the minimum spacing."""
    rng = np.random.default_rng(seed)
    failures = []
    for case in range(cases):
        n = 2 + case % 2
        d = float(rng.uniform(2.0, 6.0))
        params = default_params(num_antennas=n, waveguide_height_m=d)
        half = params.region_side_m / 2.0
        user = UserPosition(float(rng.uniform(-half, half)), float(rng.uniform(-half, half)))
        if not unimodality_condition(user, params):
            continue
        delta = params.min_spacing_m
        grid_step = delta / 50.0
        halfwidth = 3.0 * n * delta
        count = int(round(2.0 * halfwidth / grid_step)) + 1
        points = user.x_m - halfwidth + grid_step * np.arange(count)
        q = 1.0 / np.sqrt((points - user.x_m) ** 2 + user.y_m**2 + d * d)
        idx = _grid_argmax_layout(q, n, sep=50)
        xs = np.sort(points[list(idx)])
        gaps = np.diff(xs)
        if np.any(np.abs(gaps - delta) > grid_step + 1e-12):
            failures.append(f"case {case}: gaps {gaps.tolist()}")
    return CheckResult(
        name="equal-spacing-optimality",
        passed=not failures,
        cases=cases,
        seed=seed,
        detail="; ".join(failures),
    )


def single_peak_check(seed: int = 0, cases: int = 50) -> CheckResult:
    """The reciprocal-distance sum is stationary at the centered closed form
    and its finite-difference slope changes sign exactly once over the scan."""
    rng = np.random.default_rng(seed)
    failures = []
    for case in range(cases):
        n = int(rng.integers(2, 9))
        params = default_params(num_antennas=n)
        half = params.region_side_m / 2.0
        user = UserPosition(float(rng.uniform(-half, half)), float(rng.uniform(-half, half)))
        delta = params.min_spacing_m
        x1_star = user.x_m - (n - 1) / 2.0 * delta
        g_star = reciprocal_distance_sum(x1_star, user, params)
        h = delta / 100.0
        fd = (
            reciprocal_distance_sum(x1_star + h, user, params)
            - reciprocal_distance_sum(x1_star - h, user, params)
        ) / (2.0 * h)
        if abs(fd) >= 1e-9 * g_star / delta:
            failures.append(f"case {case}: slope {fd!r} at the closed form")
            continue
        halfwidth = 3.0 * n * delta
        count = int(round(2.0 * halfwidth / h)) + 1
        xs = user.x_m - halfwidth + h * np.arange(count)
        c_lat = user.y_m**2 + params.waveguide_height_m**2
        g = np.zeros(count)
        for k in range(n):
            g += 1.0 / np.sqrt((xs + k * delta - user.x_m) ** 2 + c_lat)
        diffs = np.diff(g)
        rising = int(np.sum(diffs > 0.0))
        if not (np.all(diffs[:rising] > 0.0) and np.all(diffs[rising:] < 0.0)):
            failures.append(f"case {case}: slope sign changes more than once")
    return CheckResult(
        name="single-peak-scan",
        passed=not failures,
        cases=cases,
        seed=seed,
        detail="; ".join(failures),
    )


def alignment_bound_check(seed: int = 0, cases: int = 100) -> CheckResult:
    """Refined layouts keep every consecutive circular phase gap under the
    scan-resolution bound 2*pi*step*(1/lambda + 1/lambda_guided)."""
    rng = np.random.default_rng(seed)
    failures = []
    for case in range(cases):
        n = int(rng.integers(2, 17))
        params = default_params(num_antennas=n)
        cfg = RefinementConfig.for_system(params)
        half = params.region_side_m / 2.0
        user = UserPosition(float(rng.uniform(-half, half)), float(rng.uniform(-half, half)))
        layout = stage2_refine(stage1_placement(user, params), user, params, cfg)
        layout.validate(params.min_spacing_m)
        bound = (
            TWO_PI
            * cfg.search_step_m
            * (1.0 / wavelength(params) + 1.0 / guided_wavelength(params))
            + 1e-9
        )
        phis = [float(total_phase(user, x, params)) for x in layout.antenna_x]
        worst = max(phase_gap(a, b) for a, b in zip(phis, phis[1:]))
        if worst > bound:
            failures.append(f"case {case}: gap {worst!r} above bound {bound!r}")
    return CheckResult(
        name="refinement-alignment-bound",
        passed=not failures,
        cases=cases,
        seed=seed,
        detail="; ".join(failures),
    )


def run_all_checks(seed: int = 0, cases: int | None = None) -> list[CheckResult]:
    """Run every invariant suite; ``cases`` overrides each suite's default count."""
    return [
        equal_spacing_check(seed, cases if cases is not None else 20),
        single_peak_check(seed, cases if cases is not None else 50),
        alignment_bound_check(seed, cases if cases is not None else 100),
    ]
