"""Monte Carlo ergodic-rate experiments over uniformly placed users.

Reproducibility contract: every trial draws from its own generator seeded by
(seed, trial index), so results are bit-identical regardless of worker count
or execution order.  The same seed therefore gives the same user draws to
every system and every sweep point, making per-trial comparisons paired.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .baselines import OracleConfig, conventional_array, exhaustive_search, movable_optimize
from .model import (
    SystemParams,
    UserPosition,
    conventional_channel,
    conventional_rate,
    pinching_rate,
)
from .placement import RefinementConfig, stage1_placement, two_stage_optimize
from .units import dbm_to_watts

RNG_ALGORITHM = "numpy-pcg64-seedseq(seed,trial)"

SYSTEMS = (
    "pinching_two_stage",
    "pinching_stage1_only",
    "conventional",
    "movable",
    "pinching_oracle",
)

SWEEP_VARIABLES = ("power_dbm", "side_length_m", "num_antennas")

THREADS_ENV_VAR = "PINCHWAVE_THREADS"


@dataclass(frozen=True)
class ExperimentSpec:
    """One system swept over one variable."""

    system: str
    sweep_variable: str
    sweep_values: tuple[float, ...]
    trials: int = 10_000
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.system not in SYSTEMS:
            raise ValueError(f"unknown system {self.system!r}, expected one of {SYSTEMS}")
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ValueError(
                f"unknown sweep variable {self.sweep_variable!r}, expected one of {SWEEP_VARIABLES}"
            )
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        if len(self.sweep_values) == 0:
            raise ValueError("sweep_values must be nonempty")
        if any(b <= a for a, b in zip(self.sweep_values, self.sweep_values[1:])):
            raise ValueError(f"sweep_values must be strictly increasing: {self.sweep_values}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")


@dataclass(frozen=True)
class SweepResult:
    system: str
    sweep_variable: str
    sweep_values: tuple[float, ...]
    mean_rate_bits: tuple[float, ...]
    stderr: tuple[float, ...]
    trials: int
    rng_seed: int
    base_params: SystemParams
    rng_algorithm: str = RNG_ALGORITHM


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent per-trial generator derived from (seed, trial)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_user(rng: np.random.Generator, params: SystemParams) -> UserPosition:
    """Uniform draw over the served square, x first then y."""
    half = params.region_side_m / 2.0
    return UserPosition(x_m=rng.uniform(-half, half), y_m=rng.uniform(-half, half))


def rate_for_system(
    system: str,
    user: UserPosition,
    params: SystemParams,
    refine_cfg: RefinementConfig | None = None,
    oracle_cfg: OracleConfig | None = None,
) -> float:
    """Achievable rate of one system for one user, bits/s/Hz."""
    if system == "conventional":
        channel = conventional_channel(user, conventional_array(params), params)
        return conventional_rate(channel, params).rate_bits
    if system == "movable":
        return movable_optimize(user, params).rate_bits
    if system == "pinching_stage1_only":
        layout = stage1_placement(user, params).layout
        return pinching_rate(user, layout, params).rate_bits
    if system == "pinching_two_stage":
        return two_stage_optimize(user, params, refine_cfg).report.rate_bits
    if system == "pinching_oracle":
        return exhaustive_search(user, params, oracle_cfg)[1].rate_bits
    raise ValueError(f"unknown system {system!r}")


def _trial_chunk(
    system: str,
    params: SystemParams,
    seed: int,
    trials: range,
    refine_cfg: RefinementConfig | None,
    oracle_cfg: OracleConfig | None,
) -> list[float]:
    out = []
    for t in trials:
        user = sample_user(trial_rng(seed, t), params)
        out.append(rate_for_system(system, user, params, refine_cfg, oracle_cfg))
    return out


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else the PINCHWAVE_THREADS cap (0 = auto)."""
    if workers is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if raw == "":
            return 1
        workers = int(raw)
    if workers < 0:
        raise ValueError(f"worker count must be >= 0, got {workers!r}")
    if workers == 0:
        return os.cpu_count() or 1
    return workers


def trial_rates(
    system: str,
    params: SystemParams,
    trials: int,
    seed: int,
    refine_cfg: RefinementConfig | None = None,
    oracle_cfg: OracleConfig | None = None,
    workers: int | None = None,
) -> np.ndarray:
    """Per-trial rates in trial order, independent of worker count."""
    n_workers = resolve_workers(workers)
    if n_workers <= 1 or trials < 64:
        return np.asarray(_trial_chunk(system, params, seed, range(trials), refine_cfg, oracle_cfg))
    chunk = max(1, math.ceil(trials / (4 * n_workers)))
    ranges = [range(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        parts = pool.map(
            _trial_chunk,
            *zip(*[(system, params, seed, r, refine_cfg, oracle_cfg) for r in ranges]),
        )
    return np.concatenate([np.asarray(p) for p in parts])


def ergodic_rate(
    system: str,
    params: SystemParams,
    trials: int,
    seed: int,
    refine_cfg: RefinementConfig | None = None,
    oracle_cfg: OracleConfig | None = None,
    workers: int | None = None,
) -> tuple[float, float]:
    """Mean rate over uniform users and its standard error (stddev / sqrt(trials))."""
    rates = trial_rates(system, params, trials, seed, refine_cfg, oracle_cfg, workers)
    mean = float(rates.mean())
    stderr = float(rates.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


def apply_sweep_value(params: SystemParams, variable: str, value: float) -> SystemParams:
    """Parameter set for one sweep point.

    Side-length sweeps re-derive the feed position one meter left of the
    region so the feed never enters the served span.
    """
    if variable == "power_dbm":
        return replace(params, total_power_w=dbm_to_watts(value))
    if variable == "side_length_m":
        return replace(params, region_side_m=value, feed_x_m=-value / 2.0 - 1.0)
    if variable == "num_antennas":
        n = int(value)
        if n != value:
            raise ValueError(f"num_antennas sweep values must be integers, got {value!r}")
        return replace(params, num_antennas=n)
    raise ValueError(f"unknown sweep variable {variable!r}")


def run_sweep(
    spec: ExperimentSpec,
    params: SystemParams,
    refine_cfg: RefinementConfig | None = None,
    oracle_cfg: OracleConfig | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Ergodic rate at every sweep point, same user draws at each point."""
    if spec.system == "pinching_oracle":
        counts = (
            [int(v) for v in spec.sweep_values]
            if spec.sweep_variable == "num_antennas"
            else [params.num_antennas]
        )
        if any(n > 3 for n in counts):
            raise ValueError("the exhaustive-search system is limited to 3 elements")
    means, errs = [], []
    for value in spec.sweep_values:
        point_params = apply_sweep_value(params, spec.sweep_variable, value)
        mean, err = ergodic_rate(
            spec.system, point_params, spec.trials, spec.rng_seed,
            refine_cfg, oracle_cfg, workers,
        )
        means.append(mean)
        errs.append(err)
    return SweepResult(
        system=spec.system,
        sweep_variable=spec.sweep_variable,
        sweep_values=spec.sweep_values,
        mean_rate_bits=tuple(means),
        stderr=tuple(errs),
        trials=spec.trials,
        rng_seed=spec.rng_seed,
        base_params=params,
    )
