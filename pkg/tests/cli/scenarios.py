"""
Scenario files shared by command line tests.
"""

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from beartype import beartype


@beartype
def write_scenario(
    directory: Path,
    *,
    scenario: Mapping[str, Any],
    payments: bool = True,
    duration_dependent: bool = False,
) -> Path:
    """
    Write a scenario with one pre-retirement state and a horizon of ten.

    With ``duration_dependent`` the retired mortality grows with the time
    since retirement.
    """
    retired_mortality: dict[str, Any] = {
        "from": "2",
        "to": "d",
        "kind": "constant",
        "params": {"value": 0.05},
    }
    if duration_dependent:
        retired_mortality = {
            "from": "2",
            "to": "d",
            "kind": "piecewise_linear",
            "params": {"knots": [0, 1], "values": [0.01, 0.03]},
            "duration_dependent": True,
        }
    data: dict[str, Any] = {
        "sigma": 1,
        "horizon": 10.0,
        "intensities": [
            {
                "from": "1",
                "to": "2",
                "kind": "constant",
                "params": {"value": 0.2},
            },
            {
                "from": "1",
                "to": "d",
                "kind": "constant",
                "params": {"value": 0.01},
            },
            retired_mortality,
        ],
        "discount": {"kind": "constant_rate", "params": {"rate": 0.02}},
        "scenario": dict(scenario),
    }
    if payments:
        data["payments"] = {
            "sojourn": [
                {"state": "1", "kind": "constant", "params": {"value": -1}},
                {"state": "p", "kind": "constant", "params": {"value": 1}},
            ],
            "transition": [
                {
                    "from": "1",
                    "to": "d",
                    "kind": "constant",
                    "params": {"value": 5},
                },
                {
                    "from": "p",
                    "to": "d",
                    "kind": "constant",
                    "params": {"value": 2},
                },
            ],
        }
    path = directory / "scenario.json"
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return path
