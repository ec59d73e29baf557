"""Shared fixtures: small scenarios that keep engine tests fast."""

from __future__ import annotations

import json

import pytest

from leonav.scenario import Scenario, parse_scenario

#: Scenario overrides small enough for sub-second engine runs.
TINY = {
    "grid": {"resolution": 64},
    "window": {"duration_s": 3600.0, "step_s": 600.0},
    "sweep": {"sizes": [24, 36], "altitudes_km": [800.0, 1000.0]},
}


@pytest.fixture
def tiny_scenario() -> Scenario:
    return parse_scenario(json.dumps(TINY))


@pytest.fixture
def default_scenario() -> Scenario:
    return Scenario()
