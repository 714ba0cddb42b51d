"""dBm/watt conversions. The core model is strictly linear-scale watts; these
belong at the command-line boundary only."""

import math


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0.0:
        raise ValueError(f"watts must be positive, got {watts!r}")
    return 10.0 * math.log10(watts) + 30.0
