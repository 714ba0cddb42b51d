"""Command-line front end: solve one placement, sweep ergodic rates, verify math.

Configuration is a flat JSON object; command-line flags override file values
and defaults fill the rest.  Power enters and leaves in dBm and frequency in
GHz here only; everything behind this module is linear watts and Hz.

Exit codes: 0 success, 1 configuration parse error, 2 infeasible input,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .baselines import OracleConfig, conventional_array, movable_optimize
from .experiments import (
    RNG_ALGORITHM,
    SWEEP_VARIABLES,
    SYSTEMS,
    ExperimentSpec,
    run_sweep,
)
from .model import (
    SystemParams,
    UserPosition,
    conventional_channel,
    conventional_rate,
    default_params,
    eta,
    guided_wavelength,
    pinching_rate,
    total_phase,
    wavelength,
)
from .placement import RefinementConfig, phase_gap, two_stage_optimize
from .units import dbm_to_watts
from .verification import run_all_checks

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY = 3

CSV_HEADER = "sweep_value,system,mean_rate_bps_hz,stderr,trials,seed"

# Flat configuration schema: key -> (default, type). None defaults are derived
# during resolution and reported as such in output metadata.
CONFIG_DEFAULTS: dict[str, tuple[object, type]] = {
    "carrier_frequency_ghz": (28.0, float),
    "noise_power_dbm": (-90.0, float),
    "waveguide_height_m": (3.0, float),
    "min_spacing_m": (None, float),          # derived: half the free-space wavelength
    "region_side_m": (10.0, float),
    "refractive_index": (1.4, float),
    "power_dbm": (30.0, float),
    "feed_x_m": (None, float),               # derived: one meter left of the region
    "num_antennas": (4, int),
    "systems": (["pinching_two_stage", "conventional", "movable"], list),
    "sweep_variable": ("power_dbm", str),
    "sweep_values": ([10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0], list),
    "trials": (None, int),                   # derived: 10000, or 200 with the oracle system
    "seed": (0, int),
    "step_div": (200.0, float),
    "phase_tolerance_rad": (0.05, float),
    "oracle_step_div": (50.0, float),
    "oracle_window_wavelengths": (5.0, float),
    "full_span": (False, bool),
    "user": (None, list),
    "cases": (None, int),                    # derived: per-check defaults
}


class ConfigError(Exception):
    """Malformed configuration: unreadable file, bad JSON, unknown or mistyped key."""


class InfeasibleError(Exception):
    """Well-formed configuration describing an impossible scenario."""


def _coerce(key: str, value, want: type):
    if value is None:
        return None
    if want is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"field {key!r} must be a number, got {value!r}")
        return float(value)
    if want is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"field {key!r} must be an integer, got {value!r}")
        return int(value)
    if want is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"field {key!r} must be a boolean, got {value!r}")
        return value
    if want is str:
        if not isinstance(value, str):
            raise ConfigError(f"field {key!r} must be a string, got {value!r}")
        return value
    if want is list:
        if not isinstance(value, list):
            raise ConfigError(f"field {key!r} must be a list, got {value!r}")
        return list(value)
    raise AssertionError(key)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config file {path!r} is not valid JSON "
            f"(line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    for key in data:
        if key not in CONFIG_DEFAULTS:
            raise ConfigError(f"unknown config field {key!r} in {path!r}")
    return data


def resolve_config(file_values: dict, flag_values: dict) -> tuple[dict, dict]:
    """Merge defaults, file, and flags; return (values, per-key origin)."""
    values: dict = {}
    origin: dict = {}
    for key, (default, want) in CONFIG_DEFAULTS.items():
        values[key] = default
        origin[key] = "default"
        if key in file_values:
            values[key] = _coerce(key, file_values[key], want)
            origin[key] = "config"
        if key in flag_values and flag_values[key] is not None:
            values[key] = flag_values[key]
            origin[key] = "flag"
    # derived defaults
    if values["min_spacing_m"] is None:
        lam = 299_792_458.0 / (values["carrier_frequency_ghz"] * 1e9)
        values["min_spacing_m"] = lam / 2.0
        origin["min_spacing_m"] = f"{origin['min_spacing_m']} (half wavelength)"
    if values["feed_x_m"] is None:
        values["feed_x_m"] = -values["region_side_m"] / 2.0 - 1.0
        origin["feed_x_m"] = f"{origin['feed_x_m']} (left of region)"
    if values["trials"] is None:
        oracle = "pinching_oracle" in values["systems"]
        values["trials"] = 200 if oracle else 10_000
        origin["trials"] = f"{origin['trials']} ({'oracle' if oracle else 'standard'})"
    return values, origin


def build_params(values: dict) -> SystemParams:
    try:
        return SystemParams(
            carrier_frequency_hz=values["carrier_frequency_ghz"] * 1e9,
            noise_power_w=dbm_to_watts(values["noise_power_dbm"]),
            waveguide_height_m=values["waveguide_height_m"],
            min_spacing_m=values["min_spacing_m"],
            region_side_m=values["region_side_m"],
            refractive_index=values["refractive_index"],
            total_power_w=dbm_to_watts(values["power_dbm"]),
            feed_x_m=values["feed_x_m"],
            num_antennas=values["num_antennas"],
        )
    except ValueError as exc:
        raise InfeasibleError(str(exc)) from exc


def _validate_run(values: dict) -> None:
    for system in values["systems"]:
        if system not in SYSTEMS:
            raise InfeasibleError(f"unknown system {system!r}, expected one of {SYSTEMS}")
    if values["sweep_variable"] not in SWEEP_VARIABLES:
        raise InfeasibleError(
            f"unknown sweep variable {values['sweep_variable']!r}, "
            f"expected one of {SWEEP_VARIABLES}"
        )
    if values["trials"] < 1:
        raise InfeasibleError(f"trials must be >= 1, got {values['trials']}")
    if not values["sweep_values"]:
        raise InfeasibleError("sweep_values must be nonempty")
    for v in values["sweep_values"]:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InfeasibleError(f"sweep_values must be numbers, got {v!r}")
    if not values["step_div"] > 0:
        raise InfeasibleError(f"step_div must be positive, got {values['step_div']}")
    if not values["oracle_step_div"] > 0:
        raise InfeasibleError(
            f"oracle_step_div must be positive, got {values['oracle_step_div']}"
        )
    if "pinching_oracle" in values["systems"]:
        counts = (
            [int(v) for v in values["sweep_values"]]
            if values["sweep_variable"] == "num_antennas"
            else [values["num_antennas"]]
        )
        if any(n > 3 for n in counts):
            raise InfeasibleError("the pinching_oracle system is limited to 3 antennas")


def _refine_cfg(values: dict, params: SystemParams) -> RefinementConfig:
    return RefinementConfig(
        search_step_m=wavelength(params) / values["step_div"],
        phase_tolerance_rad=values["phase_tolerance_rad"],
    )


def _oracle_cfg(values: dict, params: SystemParams) -> OracleConfig:
    return OracleConfig.for_system(
        params,
        step_divisor=values["oracle_step_div"],
        window_wavelengths=values["oracle_window_wavelengths"],
        full_span=values["full_span"],
    )


def _parse_user(values: dict) -> UserPosition:
    raw = values["user"]
    if raw is None:
        raise InfeasibleError("a user position is required; pass --user X,Y")
    if len(raw) != 2 or not all(isinstance(v, (int, float)) for v in raw):
        raise InfeasibleError(f"user must be two coordinates, got {raw!r}")
    return UserPosition(x_m=float(raw[0]), y_m=float(raw[1]))


def _metadata_lines(values: dict, origin: dict) -> list[str]:
    lines = ["# pinchwave sweep"]
    for key in CONFIG_DEFAULTS:
        if key in ("user", "cases"):
            continue
        value = values[key]
        if isinstance(value, float):
            rendered = repr(value)
        elif isinstance(value, list):
            rendered = ",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in value)
        else:
            rendered = str(value)
        lines.append(f"# {key} = {rendered} [{origin[key]}]")
    lines.append(f"# rng_algorithm = {RNG_ALGORITHM}")
    return lines


def _fmt(value: float) -> str:
    return repr(float(value))


def cmd_solve(values: dict, origin: dict, out_path: str | None) -> int:
    _validate_run(values)
    params = build_params(values)
    user = _parse_user(values)
    cfg = _refine_cfg(values, params)
    result = two_stage_optimize(user, params, cfg)

    report = result.report
    stage1_report = pinching_rate(user, result.stage1.layout, params)
    conv = conventional_rate(conventional_channel(user, conventional_array(params), params), params)
    mov = movable_optimize(user, params)

    lam = wavelength(params)
    print(f"carrier {values['carrier_frequency_ghz']} GHz   wavelength {lam:.6g} m   "
          f"guided {guided_wavelength(params):.6g} m   gain coefficient {eta(params):.6g} m^2")
    print(f"user ({user.x_m}, {user.y_m})   antennas {params.num_antennas}   "
          f"power {values['power_dbm']} dBm   spacing {params.min_spacing_m:.6g} m")
    print()
    print("stage-1 layout (equal spacing centered on the user):")
    for i, x in enumerate(result.stage1.layout.antenna_x):
        print(f"  {i + 1}: x = {_fmt(x)}")
    cond = "holds" if result.stage1.condition_satisfied else "violated"
    print(f"  reciprocal-distance objective {result.stage1.objective_value:.9g} "
          f"(single-peak condition {cond})")
    print()
    print("refined layout:")
    phis = [float(total_phase(user, x, params)) for x in result.refined_layout.antenna_x]
    for i, x in enumerate(result.refined_layout.antenna_x):
        gap = phase_gap(phis[i - 1], phis[i]) if i else 0.0
        dist = report.per_antenna_distance_m[i]
        note = f"   gap to previous {gap:.6f} rad" if i else ""
        print(f"  {i + 1}: x = {_fmt(x)}   distance {dist:.6f} m   phase {phis[i]:.6f} rad{note}")
    print(f"  largest consecutive phase gap {result.max_phase_gap_rad:.6f} rad")
    print()
    print("rates [bit/s/Hz]:")
    print(f"  pinching two-stage   {report.rate_bits:.6f}")
    print(f"  pinching stage-1     {stage1_report.rate_bits:.6f}")
    print(f"  conventional         {conv.rate_bits:.6f}")
    print(f"  movable              {mov.rate_bits:.6f}")

    if out_path is not None:
        payload = {
            "config": {k: values[k] for k in CONFIG_DEFAULTS if k != "cases"},
            "config_origin": {k: origin[k] for k in CONFIG_DEFAULTS if k != "cases"},
            "user": [user.x_m, user.y_m],
            "stage1": {
                "antenna_x": list(result.stage1.layout.antenna_x),
                "objective_value": result.stage1.objective_value,
                "condition_satisfied": result.stage1.condition_satisfied,
                "rate_bits": stage1_report.rate_bits,
            },
            "refined": {
                "antenna_x": list(result.refined_layout.antenna_x),
                "distances_m": list(report.per_antenna_distance_m),
                "phases_rad": list(report.per_antenna_phase_rad),
                "max_phase_gap_rad": result.max_phase_gap_rad,
            },
            "rates_bits_per_hz": {
                "pinching_two_stage": report.rate_bits,
                "pinching_stage1_only": stage1_report.rate_bits,
                "conventional": conv.rate_bits,
                "movable": mov.rate_bits,
            },
            "snr_linear": report.snr_linear,
        }
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"\nwrote {out_path}")
    return EXIT_OK


def cmd_sweep(values: dict, origin: dict, out_path: str | None) -> int:
    _validate_run(values)
    params = build_params(values)
    refine_cfg = _refine_cfg(values, params)
    oracle_cfg = _oracle_cfg(values, params)
    try:
        specs = [
            ExperimentSpec(
                system=system,
                sweep_variable=values["sweep_variable"],
                sweep_values=tuple(float(v) for v in values["sweep_values"]),
                trials=values["trials"],
                rng_seed=values["seed"],
            )
            for system in values["systems"]
        ]
        results = [run_sweep(s, params, refine_cfg, oracle_cfg) for s in specs]
    except ValueError as exc:
        raise InfeasibleError(str(exc)) from exc

    lines = _metadata_lines(values, origin)
    lines.append(CSV_HEADER)
    by_system = {r.system: r for r in results}
    for vi, value in enumerate(values["sweep_values"]):
        for system in values["systems"]:
            r = by_system[system]
            lines.append(
                f"{_fmt(value)},{system},{_fmt(r.mean_rate_bits[vi])},"
                f"{_fmt(r.stderr[vi])},{r.trials},{r.rng_seed}"
            )
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {out_path}")
    return EXIT_OK


def cmd_verify(values: dict, origin: dict, out_path: str | None) -> int:
    del origin, out_path
    # surface configuration problems before any suite runs
    build_params(values)
    checks = run_all_checks(seed=values["seed"], cases=values["cases"])
    failed = []
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name} ({check.cases} cases, seed {check.seed})")
        if not check.passed:
            failed.append(check)
            print(f"     {check.detail}")
    if failed:
        names = ", ".join(c.name for c in failed)
        print(f"verification failed: {names} (seed {values['seed']})", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _flag_values(args: argparse.Namespace) -> dict:
    flags: dict = {}
    if getattr(args, "user", None) is not None:
        parts = args.user.split(",")
        if len(parts) != 2:
            raise ConfigError(f"--user expects X,Y, got {args.user!r}")
        try:
            flags["user"] = [float(parts[0]), float(parts[1])]
        except ValueError as exc:
            raise ConfigError(f"--user expects numbers, got {args.user!r}") from exc
    if getattr(args, "antennas", None) is not None:
        flags["num_antennas"] = args.antennas
    if getattr(args, "power_dbm", None) is not None:
        flags["power_dbm"] = args.power_dbm
    if getattr(args, "side_length", None) is not None:
        flags["region_side_m"] = args.side_length
    if getattr(args, "systems", None) is not None:
        flags["systems"] = [s.strip() for s in args.systems.split(",") if s.strip()]
    if getattr(args, "seed", None) is not None:
        flags["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        flags["trials"] = args.trials
    if getattr(args, "step_div", None) is not None:
        flags["step_div"] = args.step_div
    if getattr(args, "full_span", False):
        flags["full_span"] = True
    if getattr(args, "cases", None) is not None:
        flags["cases"] = args.cases
    return flags


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchwave",
        description="Placement optimization and rate simulation for waveguide-fed "
        "pinching-antenna downlinks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, sweepy: bool) -> None:
        p.add_argument("--config", metavar="PATH", help="JSON config file; flags override it")
        p.add_argument("--antennas", type=int, metavar="N", help="number of antennas")
        p.add_argument("--power-dbm", type=float, metavar="V", help="transmit power, dBm")
        p.add_argument("--side-length", type=float, metavar="V", help="served square side, m")
        p.add_argument("--seed", type=int, metavar="U64", help="experiment seed")
        p.add_argument("--step-div", type=float, metavar="K",
                       help="refinement scan step = wavelength / K")
        p.add_argument("--out", metavar="PATH", help="write results to this file")
        if sweepy:
            p.add_argument("--systems", metavar="LIST",
                           help="comma-separated systems: " + ",".join(SYSTEMS))
            p.add_argument("--trials", type=int, metavar="N", help="Monte Carlo trials per point")
            p.add_argument("--full-span", action="store_true",
                           help="exhaustive search over the whole served span")

    p_solve = sub.add_parser("solve", help="optimize one placement and report rates")
    common(p_solve, sweepy=False)
    p_solve.add_argument("--user", metavar="X,Y", help="user position, m")

    p_sweep = sub.add_parser("sweep", help="Monte Carlo ergodic-rate sweep to CSV")
    common(p_sweep, sweepy=True)

    p_verify = sub.add_parser("verify", help="run placement-math self-checks")
    p_verify.add_argument("--config", metavar="PATH", help="JSON config file; flags override it")
    p_verify.add_argument("--seed", type=int, metavar="U64", help="scenario seed")
    p_verify.add_argument("--cases", type=int, metavar="N", help="scenario count per check")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = load_config(getattr(args, "config", None))
        flags = _flag_values(args)
        values, origin = resolve_config(file_values, flags)
        out_path = getattr(args, "out", None)
        if args.command == "solve":
            return cmd_solve(values, origin, out_path)
        if args.command == "sweep":
            return cmd_sweep(values, origin, out_path)
        if args.command == "verify":
            return cmd_verify(values, origin, out_path)
        raise AssertionError(args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"infeasible input: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    raise SystemExit(main())
