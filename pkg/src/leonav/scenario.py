"""Scenario files: parsing, validation, canonical serialization, hashing.

A scenario is a JSON object with optional sections (earth, walker, grid,
window, link, jammer, materials, payload, sweep); an empty object is a
complete, valid scenario at the documented desk-scale defaults.  Unknown
keys are errors unless lenient parsing is requested, in which case they
are reported and ignored.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Any

from .geometry import TimeWindow
from .orbits import EarthModel
from .payload import ClockUnit, PayloadHeritage
from .rflink import (
    GALILEO_ALTITUDE_KM,
    GPS_ALTITUDE_KM,
    JammerCalibration,
    LinkParams,
    MaterialLossTable,
)


class ScenarioError(ValueError):
    """A scenario file failed validation; the message names the key at fault."""


@dataclass(frozen=True)
class WalkerConfig:
    """Constellation defaults: the single-run design and sweep conventions."""

    total_sats: int = 300
    planes: int | None = None
    phasing: int = 1
    altitude_km: float = 900.0
    inclination_deg: float = 90.0
    raan_spread_deg: float = 180.0


@dataclass(frozen=True)
class GridConfig:
    scheme: str = "fibonacci"
    resolution: int = 500


@dataclass(frozen=True)
class SweepConfig:
    """DOP map/sweep controls shared by dop-map, dop-sweep, and optimize."""

    sizes: tuple[int, ...] = (200, 250, 300, 350, 400)
    altitudes_km: tuple[float, ...] = (600.0, 800.0, 1000.0, 1200.0, 1400.0)
    mask_deg: float = 5.0
    percentile: float = 95.0
    aggregation: str = "pooled"


@dataclass(frozen=True)
class LinkConfig:
    """Carrier plus the altitude/mask samplings of the RF curve reports."""

    reference: str = "L1"
    frequency_hz: float | None = None
    meo_altitude_km: float = GALILEO_ALTITUDE_KM
    elevation_deg: float = 90.0
    pathloss_altitudes_km: tuple[float, ...] = (
        500.0, 700.0, 1000.0, 1400.0, 2000.0, 3000.0, 5000.0, 8000.0,
        12000.0, GPS_ALTITUDE_KM, GALILEO_ALTITUDE_KM,
    )
    footprint_altitudes_km: tuple[float, ...] = (
        500.0, 600.0, 700.0, 800.0, 900.0, 1000.0, 1100.0, 1200.0, 1300.0, 1400.0,
    )
    footprint_masks_deg: tuple[float, ...] = (0.0, 30.0)

    @property
    def params(self) -> LinkParams:
        return LinkParams(reference=self.reference, frequency_hz=self.frequency_hz)


@dataclass(frozen=True)
class JammerConfig:
    """Inverse-square model anchor plus the margins/columns of the report."""

    ref_power_w: float = 0.01
    ref_radius_m: float = 100.0
    margins_db: tuple[float, ...] = (0.0, 5.0, 10.0, 20.0, 30.0)
    report_power_w: float = 0.5
    report_radius_m: float = 100.0

    @property
    def calibration(self) -> JammerCalibration:
        return JammerCalibration(
            ref_power_w=self.ref_power_w, ref_radius_m=self.ref_radius_m
        )


@dataclass(frozen=True)
class PayloadConfig:
    """Heritage payload figures plus the LEO scaling knobs."""

    heritage: PayloadHeritage = PayloadHeritage()
    leo_signals: int = 2
    overhead_low: float = 0.0
    overhead_high: float = 0.9

    @property
    def overhead_range(self) -> tuple[float, float]:
        return (self.overhead_low, self.overhead_high)


@dataclass(frozen=True)
class Scenario:
    """Fully-defaulted run configuration; hashable via its canonical JSON."""

    earth: EarthModel = EarthModel()
    walker: WalkerConfig = WalkerConfig()
    grid: GridConfig = GridConfig()
    window: TimeWindow = TimeWindow()
    sweep: SweepConfig = SweepConfig()
    link: LinkConfig = LinkConfig()
    jammer: JammerConfig = JammerConfig()
    materials: MaterialLossTable = MaterialLossTable()
    payload: PayloadConfig = PayloadConfig()


def _expect(value: Any, kinds: tuple[type, ...], key: str, constraint: str) -> Any:
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise ScenarioError(f"{key}: must be {constraint} (got {value!r})")
    return value


def _number(section: dict, key: str, default: float, positive: bool = True) -> float:
    if key.split(".")[-1] not in section:
        return default
    raw = _expect(section[key.split(".")[-1]], (int, float), key, "a number")
    val = float(raw)
    if positive and val <= 0.0:
        raise ScenarioError(f"{key}: must be strictly positive (got {val})")
    return val


def _integer(section: dict, key: str, default: int | None) -> int | None:
    name = key.split(".")[-1]
    if name not in section:
        return default
    if section[name] is None:
        return None
    return int(_expect(section[name], (int,), key, "an integer"))


def _string(section: dict, key: str, default: str, allowed: tuple[str, ...]) -> str:
    name = key.split(".")[-1]
    if name not in section:
        return default
    val = _expect(section[name], (str,), key, "a string")
    if val not in allowed:
        raise ScenarioError(f"{key}: must be one of {sorted(allowed)} (got {val!r})")
    return val


def _number_list(section: dict, key: str, default: tuple) -> tuple:
    name = key.split(".")[-1]
    if name not in section:
        return default
    raw = _expect(section[name], (list,), key, "a list of numbers")
    out = []
    for i, item in enumerate(raw):
        out.append(float(_expect(item, (int, float), f"{key}[{i}]", "a number")))
    return tuple(out)


def _check_keys(section: dict, known: tuple[str, ...], where: str, strict: bool) -> None:
    for key in section:
        if key not in known:
            message = f"unknown key {where}.{key!r} (known keys: {', '.join(known)})"
            if strict:
                raise ScenarioError(message)
            print(f"warning: ignoring {message}", file=sys.stderr)


_SECTION_KEYS: dict[str, tuple[str, ...]] = {
    "earth": ("radius_km", "mu_km3_s2", "rotation_rate_rad_s"),
    "walker": (
        "total_sats", "planes", "phasing", "altitude_km",
        "inclination_deg", "raan_spread_deg",
    ),
    "grid": ("scheme", "resolution"),
    "window": ("duration_s", "step_s"),
    "sweep": ("sizes", "altitudes_km", "mask_deg", "percentile", "aggregation"),
    "link": (
        "reference", "frequency_hz", "meo_altitude_km", "elevation_deg",
        "pathloss_altitudes_km", "footprint_altitudes_km", "footprint_masks_deg",
    ),
    "jammer": (
        "ref_power_w", "ref_radius_m", "margins_db", "report_power_w",
        "report_radius_m",
    ),
    "materials": ("wood_db", "brick_db", "concrete_db", "glass_db", "container_db"),
    "payload": (
        "total_payload_w", "rf_output_w_low", "rf_output_w_high", "pa_efficiency",
        "n_signals", "clocks", "leo_signals", "overhead_low", "overhead_high",
    ),
}


def _parse_clocks(section: dict, default: tuple[ClockUnit, ...]) -> tuple[ClockUnit, ...]:
    if "clocks" not in section:
        return default
    raw = _expect(section["clocks"], (list,), "payload.clocks", "a list of objects")
    units = []
    for i, entry in enumerate(raw):
        where = f"payload.clocks[{i}]"
        entry = _expect(entry, (dict,), where, "an object")
        _check_keys(entry, ("name", "unit_power_w", "count"), where, strict=True)
        if "name" not in entry or "unit_power_w" not in entry:
            raise ScenarioError(f"{where}: requires 'name' and 'unit_power_w'")
        units.append(
            ClockUnit(
                name=_expect(entry["name"], (str,), f"{where}.name", "a string"),
                unit_power_w=float(
                    _expect(entry["unit_power_w"], (int, float), f"{where}.unit_power_w", "a number")
                ),
                count=int(_expect(entry.get("count", 1), (int,), f"{where}.count", "an integer")),
            )
        )
    return tuple(units)


def parse_scenario(text: str, strict: bool = True) -> Scenario:
    """Parses and validates scenario JSON text into a Scenario.

    Args:
        text: JSON source; an empty object yields the default scenario.
        strict: reject unknown keys (default); when False they are
            reported to stderr and ignored.

    Raises:
        ScenarioError: syntax errors (with line/column) or any violated
            constraint, naming the offending key.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"scenario syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise ScenarioError("scenario root must be a JSON object")
    _check_keys(raw, tuple(_SECTION_KEYS), "scenario", strict)
    sections: dict[str, dict] = {}
    for name in _SECTION_KEYS:
        section = raw.get(name, {})
        if name in raw:
            section = _expect(section, (dict,), name, "an object")
            _check_keys(section, _SECTION_KEYS[name], name, strict)
        sections[name] = section

    try:
        earth = EarthModel(
            radius_km=_number(sections["earth"], "earth.radius_km", 6378.137),
            mu_km3_s2=_number(sections["earth"], "earth.mu_km3_s2", 398600.4418),
            rotation_rate_rad_s=_number(
                sections["earth"], "earth.rotation_rate_rad_s", 7.2921159e-5
            ),
        )

        wd = sections["walker"]
        walker = WalkerConfig(
            total_sats=_integer(wd, "walker.total_sats", 300),
            planes=_integer(wd, "walker.planes", None),
            phasing=_integer(wd, "walker.phasing", 1),
            altitude_km=_number(wd, "walker.altitude_km", 900.0),
            inclination_deg=_number(wd, "walker.inclination_deg", 90.0, positive=False),
            raan_spread_deg=_number(wd, "walker.raan_spread_deg", 180.0),
        )
        if walker.total_sats < 1:
            raise ScenarioError(
                f"walker.total_sats ({walker.total_sats}) must be >= 1"
            )
        if walker.planes is not None:
            if walker.planes < 1:
                raise ScenarioError(f"walker.planes ({walker.planes}) must be >= 1")
            if walker.total_sats % walker.planes != 0:
                raise ScenarioError(
                    f"walker.planes ({walker.planes}) does not divide "
                    f"walker.total_sats ({walker.total_sats})"
                )
        if walker.phasing < 0:
            raise ScenarioError(f"walker.phasing ({walker.phasing}) must be >= 0")
        if not 0.0 <= walker.inclination_deg <= 180.0:
            raise ScenarioError(
                f"walker.inclination_deg ({walker.inclination_deg}) must lie in [0, 180]"
            )
        if walker.raan_spread_deg not in (180.0, 360.0):
            raise ScenarioError(
                f"walker.raan_spread_deg ({walker.raan_spread_deg}) must be 180 or 360"
            )

        grid = GridConfig(
            scheme=_string(
                sections["grid"], "grid.scheme", "fibonacci", ("fibonacci", "latlon")
            ),
            resolution=_integer(sections["grid"], "grid.resolution", 500),
        )
        if grid.resolution < 1:
            raise ScenarioError(f"grid.resolution ({grid.resolution}) must be >= 1")

        window = TimeWindow(
            duration_s=_number(sections["window"], "window.duration_s", 21600.0),
            step_s=_number(sections["window"], "window.step_s", 120.0),
        )

        sw = sections["sweep"]
        sizes_raw = _number_list(sw, "sweep.sizes", (200, 250, 300, 350, 400))
        sizes = tuple(int(s) for s in sizes_raw)
        if any(s < 1 for s in sizes):
            raise ScenarioError(f"sweep.sizes entries must be >= 1 (got {sizes})")
        sweep = SweepConfig(
            sizes=sizes,
            altitudes_km=_number_list(
                sw, "sweep.altitudes_km", (600.0, 800.0, 1000.0, 1200.0, 1400.0)
            ),
            mask_deg=_number(sw, "sweep.mask_deg", 5.0, positive=False),
            percentile=_number(sw, "sweep.percentile", 95.0),
            aggregation=_string(
                sw, "sweep.aggregation", "pooled", ("pooled", "worst_site")
            ),
        )
        if any(h <= 0.0 for h in sweep.altitudes_km):
            raise ScenarioError(
                f"sweep.altitudes_km entries must be positive (got {sweep.altitudes_km})"
            )
        if not 0.0 <= sweep.mask_deg < 90.0:
            raise ScenarioError(f"sweep.mask_deg ({sweep.mask_deg}) must lie in [0, 90)")
        if not 0.0 < sweep.percentile <= 100.0:
            raise ScenarioError(
                f"sweep.percentile ({sweep.percentile}) must lie in (0, 100]"
            )

        lk = sections["link"]
        link = LinkConfig(
            reference=_string(lk, "link.reference", "L1", ("L1", "L2", "L5")),
            frequency_hz=(
                _number(lk, "link.frequency_hz", 0.0)
                if lk.get("frequency_hz") is not None
                else None
            ),
            meo_altitude_km=_number(lk, "link.meo_altitude_km", GALILEO_ALTITUDE_KM),
            elevation_deg=_number(lk, "link.elevation_deg", 90.0, positive=False),
            pathloss_altitudes_km=_number_list(
                lk, "link.pathloss_altitudes_km",
                LinkConfig().pathloss_altitudes_km,
            ),
            footprint_altitudes_km=_number_list(
                lk, "link.footprint_altitudes_km",
                LinkConfig().footprint_altitudes_km,
            ),
            footprint_masks_deg=_number_list(
                lk, "link.footprint_masks_deg", (0.0, 30.0)
            ),
        )
        if not 0.0 <= link.elevation_deg <= 90.0:
            raise ScenarioError(
                f"link.elevation_deg ({link.elevation_deg}) must lie in [0, 90]"
            )
        if any(m < 0.0 or m >= 90.0 for m in link.footprint_masks_deg):
            raise ScenarioError(
                f"link.footprint_masks_deg entries must lie in [0, 90) "
                f"(got {link.footprint_masks_deg})"
            )

        jm = sections["jammer"]
        jammer = JammerConfig(
            ref_power_w=_number(jm, "jammer.ref_power_w", 0.01),
            ref_radius_m=_number(jm, "jammer.ref_radius_m", 100.0),
            margins_db=_number_list(jm, "jammer.margins_db", (0.0, 5.0, 10.0, 20.0, 30.0)),
            report_power_w=_number(jm, "jammer.report_power_w", 0.5),
            report_radius_m=_number(jm, "jammer.report_radius_m", 100.0),
        )
        if any(m < 0.0 for m in jammer.margins_db):
            raise ScenarioError(
                f"jammer.margins_db entries must be >= 0 (got {jammer.margins_db})"
            )

        mt = sections["materials"]
        materials = MaterialLossTable(
            walls=(
                ("wood", _number(mt, "materials.wood_db", 10.0)),
                ("brick", _number(mt, "materials.brick_db", 12.0)),
                ("concrete", _number(mt, "materials.concrete_db", 15.0)),
                ("glass", _number(mt, "materials.glass_db", 17.0)),
                ("container", _number(mt, "materials.container_db", 25.0)),
            )
        )

        pl = sections["payload"]
        heritage = PayloadHeritage(
            total_payload_w=_number(pl, "payload.total_payload_w", 900.0),
            rf_output_w_low=_number(pl, "payload.rf_output_w_low", 254.0),
            rf_output_w_high=_number(pl, "payload.rf_output_w_high", 273.0),
            pa_efficiency=_number(pl, "payload.pa_efficiency", 0.51),
            n_signals=_integer(pl, "payload.n_signals", 10),
            clocks=_parse_clocks(pl, PayloadHeritage().clocks),
        )
        payload = PayloadConfig(
            heritage=heritage,
            leo_signals=_integer(pl, "payload.leo_signals", 2),
            overhead_low=_number(pl, "payload.overhead_low", 0.0, positive=False),
            overhead_high=_number(pl, "payload.overhead_high", 0.9, positive=False),
        )
        if payload.leo_signals < 1:
            raise ScenarioError(f"payload.leo_signals ({payload.leo_signals}) must be >= 1")
        if payload.overhead_low < 0.0 or payload.overhead_high < payload.overhead_low:
            raise ScenarioError(
                f"payload overhead range ({payload.overhead_low}, "
                f"{payload.overhead_high}) must satisfy 0 <= low <= high"
            )
    except ScenarioError:
        raise
    except ValueError as exc:
        # Domain dataclass validation (EarthModel, TimeWindow, ...) reuses
        # its own message but is still a scenario-validation failure here.
        raise ScenarioError(str(exc)) from None

    return Scenario(
        earth=earth, walker=walker, grid=grid, window=window, sweep=sweep,
        link=link, jammer=jammer, materials=materials, payload=payload,
    )


def scenario_to_dict(scenario: Scenario) -> dict:
    """Plain-JSON mirror of a scenario with every default made explicit."""
    return {
        "earth": {
            "radius_km": scenario.earth.radius_km,
            "mu_km3_s2": scenario.earth.mu_km3_s2,
            "rotation_rate_rad_s": scenario.earth.rotation_rate_rad_s,
        },
        "walker": {
            "total_sats": scenario.walker.total_sats,
            "planes": scenario.walker.planes,
            "phasing": scenario.walker.phasing,
            "altitude_km": scenario.walker.altitude_km,
            "inclination_deg": scenario.walker.inclination_deg,
            "raan_spread_deg": scenario.walker.raan_spread_deg,
        },
        "grid": {
            "scheme": scenario.grid.scheme,
            "resolution": scenario.grid.resolution,
        },
        "window": {
            "duration_s": scenario.window.duration_s,
            "step_s": scenario.window.step_s,
        },
        "sweep": {
            "sizes": list(scenario.sweep.sizes),
            "altitudes_km": list(scenario.sweep.altitudes_km),
            "mask_deg": scenario.sweep.mask_deg,
            "percentile": scenario.sweep.percentile,
            "aggregation": scenario.sweep.aggregation,
        },
        "link": {
            "reference": scenario.link.reference,
            "frequency_hz": scenario.link.frequency_hz,
            "meo_altitude_km": scenario.link.meo_altitude_km,
            "elevation_deg": scenario.link.elevation_deg,
            "pathloss_altitudes_km": list(scenario.link.pathloss_altitudes_km),
            "footprint_altitudes_km": list(scenario.link.footprint_altitudes_km),
            "footprint_masks_deg": list(scenario.link.footprint_masks_deg),
        },
        "jammer": {
            "ref_power_w": scenario.jammer.ref_power_w,
            "ref_radius_m": scenario.jammer.ref_radius_m,
            "margins_db": list(scenario.jammer.margins_db),
            "report_power_w": scenario.jammer.report_power_w,
            "report_radius_m": scenario.jammer.report_radius_m,
        },
        "materials": {f"{name}_db": loss for name, loss in scenario.materials.walls},
        "payload": {
            "total_payload_w": scenario.payload.heritage.total_payload_w,
            "rf_output_w_low": scenario.payload.heritage.rf_output_w_low,
            "rf_output_w_high": scenario.payload.heritage.rf_output_w_high,
            "pa_efficiency": scenario.payload.heritage.pa_efficiency,
            "n_signals": scenario.payload.heritage.n_signals,
            "clocks": [
                {"name": c.name, "unit_power_w": c.unit_power_w, "count": c.count}
                for c in scenario.payload.heritage.clocks
            ],
            "leo_signals": scenario.payload.leo_signals,
            "overhead_low": scenario.payload.overhead_low,
            "overhead_high": scenario.payload.overhead_high,
        },
    }


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical JSON text: sorted keys, explicit defaults, 2-space indent."""
    return json.dumps(scenario_to_dict(scenario), sort_keys=True, indent=2) + "\n"


def scenario_hash(scenario: Scenario) -> str:
    """SHA-256 hex digest of the canonical serialization."""
    return hashlib.sha256(serialize_scenario(scenario).encode("utf-8")).hexdigest()
