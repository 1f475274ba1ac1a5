"""Shared fixtures: shipped scenarios and their snapshot series, computed
once per session (series are immutable; tests that need to mutate build
their own)."""

from __future__ import annotations

import pytest

from nads.nads_core import snapshot_series
from nads.scenario import list_shipped, load_shipped

FLAGSHIP = "gaussian-chirped-damped"
SLOW_ADIABATIC = "gaussian-slow-adiabatic"


@pytest.fixture(scope="session")
def shipped_series():
    """{name: (Scenario, SnapshotSeries)} for every shipped scenario."""
    out = {}
    for name in list_shipped():
        scenario = load_shipped(name)
        out[name] = (scenario, snapshot_series(scenario.system, scenario.field, scenario.grid()))
    return out


@pytest.fixture(scope="session")
def flagship(shipped_series):
    """The chirped damped Gaussian scenario and its series."""
    return shipped_series[FLAGSHIP]
