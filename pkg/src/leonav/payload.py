"""Navigation payload power budgets.

Scales a heritage MEO navigation payload (clocks, signal generation,
power amplification) down to a small LEO broadcaster, then expresses the
result as the power needed for GNSS-equivalent received signal strength
given the LEO footprint advantage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ClockUnit:
    """One frequency-standard line item of the heritage budget."""

    name: str
    unit_power_w: float
    count: int = 1

    def __post_init__(self) -> None:
        if self.unit_power_w <= 0.0:
            raise ValueError(f"unit_power_w ({self.unit_power_w}) must be positive")
        if self.count < 1:
            raise ValueError(f"count ({self.count}) must be >= 1")


@dataclass(frozen=True)
class PayloadHeritage:
    """Heritage MEO payload figures the LEO estimate scales from.

    Defaults describe a ~900 W navigation payload broadcasting ten
    signals, with 254-273 W of RF output at 51% power-amplifier
    efficiency and a two-rubidium, two-hydrogen-maser clock suite.
    """

    total_payload_w: float = 900.0
    rf_output_w_low: float = 254.0
    rf_output_w_high: float = 273.0
    pa_efficiency: float = 0.51
    n_signals: int = 10
    clocks: tuple[ClockUnit, ...] = (
        ClockUnit("rubidium", 35.0, 2),
        ClockUnit("hydrogen_maser", 70.0, 2),
    )

    def __post_init__(self) -> None:
        if self.total_payload_w <= 0.0:
            raise ValueError(f"total_payload_w ({self.total_payload_w}) must be positive")
        if self.rf_output_w_low <= 0.0:
            raise ValueError(f"rf_output_w_low ({self.rf_output_w_low}) must be positive")
        if self.rf_output_w_high < self.rf_output_w_low:
            raise ValueError(
                f"rf_output_w_high ({self.rf_output_w_high}) must be >= "
                f"rf_output_w_low ({self.rf_output_w_low})"
            )
        if not 0.0 < self.pa_efficiency <= 1.0:
            raise ValueError(
                f"pa_efficiency ({self.pa_efficiency}) must lie in (0, 1]"
            )
        if self.n_signals < 1:
            raise ValueError(f"n_signals ({self.n_signals}) must be >= 1")


DEFAULT_HERITAGE = PayloadHeritage()

#: Footprint advantage assumed for GNSS-equivalent conversion when no
#: computed gain range is supplied: 4x to 10x, in dB.
DEFAULT_GAIN_DB_RANGE = (10.0 * math.log10(4.0), 10.0)


def clock_budget_w(clocks: tuple[ClockUnit, ...]) -> float:
    """Total clock-suite power: sum of unit power times unit count."""
    return sum(c.unit_power_w * c.count for c in clocks)


def signal_generation_w(rf_output_w: float, pa_efficiency: float) -> float:
    """Bus power drawn to produce a given RF output at a PA efficiency."""
    if rf_output_w <= 0.0:
        raise ValueError(f"rf_output_w ({rf_output_w}) must be positive")
    if not 0.0 < pa_efficiency <= 1.0:
        raise ValueError(f"pa_efficiency ({pa_efficiency}) must lie in (0, 1]")
    return rf_output_w / pa_efficiency


def per_signal_bus_power_w(
    rf_output_w: float, n_signals: int, pa_efficiency: float
) -> float:
    """Bus power per broadcast signal: (RF output / efficiency) / signals."""
    if n_signals < 1:
        raise ValueError(f"n_signals ({n_signals}) must be >= 1")
    return signal_generation_w(rf_output_w, pa_efficiency) / n_signals


def leo_payload_power_w(
    n_signals: int,
    per_signal_w: float,
    overhead_range: tuple[float, float] = (0.0, 0.9),
) -> tuple[float, float]:
    """Bus-power range of an n-signal LEO payload with integration overhead.

    Returns (low, high) = n * per_signal * (1 + overhead) at the two
    overhead endpoints.
    """
    if n_signals < 1:
        raise ValueError(f"n_signals ({n_signals}) must be >= 1")
    if per_signal_w <= 0.0:
        raise ValueError(f"per_signal_w ({per_signal_w}) must be positive")
    low, high = overhead_range
    if low < 0.0 or high < low:
        raise ValueError(
            f"overhead_range ({overhead_range}) must satisfy 0 <= low <= high"
        )
    base = n_signals * per_signal_w
    return (base * (1.0 + low), base * (1.0 + high))


def gnss_equivalent_power_w(
    leo_total_w_range: tuple[float, float],
    footprint_gain_db_range: tuple[float, float] = DEFAULT_GAIN_DB_RANGE,
) -> tuple[float, float]:
    """Power delivering GNSS-equivalent signal strength from LEO.

    Divides the upper (with-overhead) payload endpoint by the linear
    footprint gain at both gain endpoints, so the returned (low, high)
    pair brackets the with-overhead case across the gain range.  Zero
    gain leaves powers unchanged.
    """
    p_low, p_high = leo_total_w_range
    if p_low <= 0.0 or p_high < p_low:
        raise ValueError(
            f"leo_total_w_range ({leo_total_w_range}) must satisfy 0 < low <= high"
        )
    g_low, g_high = footprint_gain_db_range
    if g_low < 0.0 or g_high < g_low:
        raise ValueError(
            f"footprint_gain_db_range ({footprint_gain_db_range}) must satisfy "
            f"0 <= low <= high"
        )
    return (p_high / 10.0 ** (g_high / 10.0), p_high / 10.0 ** (g_low / 10.0))


@dataclass(frozen=True)
class LeoPayloadEstimate:
    """Derived LEO payload budget and its GNSS-equivalent envelope."""

    n_signals: int
    per_signal_bus_w: float
    overhead_range: tuple[float, float]
    total_bus_w_range: tuple[float, float]
    gnss_equivalent_w_range: tuple[float, float]

    def __post_init__(self) -> None:
        if self.overhead_range[0] < 0.0:
            raise ValueError(
                f"overhead_range ({self.overhead_range}) must be non-negative"
            )
        for name in ("total_bus_w_range", "gnss_equivalent_w_range"):
            low, high = getattr(self, name)
            if not 0.0 < low <= high:
                raise ValueError(f"{name} ({(low, high)}) must satisfy 0 < low <= high")


def leo_payload_estimate(
    heritage: PayloadHeritage = DEFAULT_HERITAGE,
    n_signals: int = 2,
    overhead_range: tuple[float, float] = (0.0, 0.9),
    footprint_gain_db_range: tuple[float, float] = DEFAULT_GAIN_DB_RANGE,
) -> LeoPayloadEstimate:
    """Full heritage-to-LEO pipeline with default two-signal scaling.

    The per-signal figure uses the heritage RF output's upper endpoint
    (the conservative headline number).
    """
    per_signal = per_signal_bus_power_w(
        heritage.rf_output_w_high, heritage.n_signals, heritage.pa_efficiency
    )
    total = leo_payload_power_w(n_signals, per_signal, overhead_range)
    gnss = gnss_equivalent_power_w(total, footprint_gain_db_range)
    return LeoPayloadEstimate(
        n_signals=n_signals,
        per_signal_bus_w=per_signal,
        overhead_range=overhead_range,
        total_bus_w_range=total,
        gnss_equivalent_w_range=gnss,
    )
