"""Placement optimization and rate simulation for waveguide-fed pinching antennas."""

from .baselines import (
    MovableTrack,
    OracleConfig,
    conventional_array,
    exhaustive_search,
    movable_optimize,
)
from .experiments import (
    ExperimentSpec,
    SweepResult,
    ergodic_rate,
    run_sweep,
    sample_user,
    trial_rates,
    trial_rng,
)
from .model import (
    RateReport,
    SystemParams,
    UserPosition,
    WaveguideLayout,
    conventional_channel,
    conventional_rate,
    default_params,
    distance_to_user,
    effective_gain,
    eta,
    guided_wavelength,
    pinching_coefficient,
    pinching_rate,
    total_phase,
    wavelength,
)
from .placement import (
    RefinementConfig,
    Stage1Solution,
    TwoStageResult,
    phase_gap,
    reciprocal_distance_sum,
    refine_one,
    stage1_placement,
    stage2_refine,
    two_stage_optimize,
    unimodality_condition,
)

__version__ = "0.1.0"

__all__ = [
    "ExperimentSpec",
    "MovableTrack",
    "OracleConfig",
    "RateReport",
    "RefinementConfig",
    "Stage1Solution",
    "SweepResult",
    "SystemParams",
    "TwoStageResult",
    "UserPosition",
    "WaveguideLayout",
    "conventional_array",
    "conventional_channel",
    "conventional_rate",
    "default_params",
    "distance_to_user",
    "effective_gain",
    "ergodic_rate",
    "eta",
    "exhaustive_search",
    "guided_wavelength",
    "movable_optimize",
    "phase_gap",
    "pinching_coefficient",
    "pinching_rate",
    "reciprocal_distance_sum",
    "refine_one",
    "run_sweep",
    "sample_user",
    "stage1_placement",
    "stage2_refine",
    "total_phase",
    "trial_rates",
    "trial_rng",
    "two_stage_optimize",
    "unimodality_condition",
    "wavelength",
]
