"""
Tests for scenario files.
"""

from pathlib import Path

import pytest

from retirement_thiele.cli.config import (
    CHECKS,
    SCENARIO_REGIMES,
    McSettings,
    ScenarioConfig,
    Thresholds,
    load_scenario,
    parse_regimes,
)
from retirement_thiele.exceptions import ScenarioConfigError
from retirement_thiele.thiele.surfaces import Regime
from tests.cli.scenarios import write_scenario


def test_defaults(tmp_path: Path) -> None:
    """
    Only the grid step is required.
    """
    path = write_scenario(directory=tmp_path, scenario={"grid_step": 0.5})
    config = load_scenario(path=path)
    assert config.model_path == path
    assert config.regimes == SCENARIO_REGIMES
    assert config.checks == CHECKS
    assert config.mc == McSettings()
    assert config.thresholds == Thresholds(
        residual=1e-3,
        identity=1e-3,
        tower=5e-3,
        z_score=3.0,
        z_fraction=0.99,
    )
    assert config.eta_bin_width == pytest.approx(2.5)
    assert config.uh_bin_width == pytest.approx(2.5)
    assert config.times is None


def test_file_settings(tmp_path: Path) -> None:
    """
    Settings are read from the scenario object.
    """
    path = write_scenario(
        directory=tmp_path,
        scenario={
            "grid_step": 0.25,
            "regimes": ["g2", "Practice"],
            "checks": ["tower"],
            "mc": {"paths": 300, "seed": 4, "eta_bin_width": 1},
            "thresholds": {"z_score": 4},
            "times": [1, 2],
            "out_dir": "out",
        },
    )
    config = load_scenario(path=path)
    assert config.regimes == (Regime.G2, Regime.PRACTICE)
    assert config.checks == ("tower",)
    assert config.mc.paths == 300
    assert config.mc.seed == 4
    assert config.eta_bin_width == 1.0
    assert config.uh_bin_width == pytest.approx(1.25)
    assert config.thresholds.z_score == 4.0
    assert config.times == (1.0, 2.0)
    assert config.out_dir == Path("out")


def test_overrides(tmp_path: Path) -> None:
    """
    Overrides replace file settings.
    """
    path = write_scenario(
        directory=tmp_path,
        scenario={"grid_step": 0.25, "mc": {"paths": 300, "seed": 4}},
    )
    config = load_scenario(
        path=path,
        overrides={
            "grid_step": 0.5,
            "paths": 10,
            "regimes": ["full"],
            "out_dir": tmp_path / "elsewhere",
        },
    )
    assert config.grid_step == 0.5
    assert config.mc.paths == 10
    assert config.mc.seed == 4
    assert config.regimes == (Regime.FULL,)
    assert config.out_dir == tmp_path / "elsewhere"


def test_separate_model_file(tmp_path: Path) -> None:
    """
    A scenario can point to a model file next to it.
    """
    path = write_scenario(directory=tmp_path, scenario={"grid_step": 0.5})
    other = tmp_path / "other.json"
    other.write_text(
        data='{"scenario": {"model": "scenario.json", "grid_step": 1}}',
        encoding="utf-8",
    )
    assert load_scenario(path=other).model_path == path


@pytest.mark.parametrize(
    argnames="scenario",
    argvalues=[
        {"grid_step": 0.0},
        {"grid_step": -1},
        {},
        {"grid_step": 0.5, "regimes": []},
        {"grid_step": 0.5, "regimes": ["G1", "G1"]},
        {"grid_step": 0.5, "regimes": ["extended"]},
        {"grid_step": 0.5, "checks": ["spelling"]},
        {"grid_step": 0.5, "mc": {"paths": 0}},
        {"grid_step": 0.5, "mc": {"bandwidth": -0.1}},
        {"grid_step": 0.5, "mc": {"colour": "red"}},
        {"grid_step": 0.5, "mc": {"paths": "many"}},
        {"grid_step": 0.5, "mc": []},
        {"grid_step": 0.5, "times": [-1]},
    ],
)
def test_invalid(tmp_path: Path, scenario: dict[str, object]) -> None:
    """
    Invalid settings are reported.
    """
    path = write_scenario(directory=tmp_path, scenario=scenario)
    with pytest.raises(expected_exception=ScenarioConfigError):
        load_scenario(path=path)


def test_unreadable(tmp_path: Path) -> None:
    """
    A missing or malformed file is reported.
    """
    with pytest.raises(expected_exception=ScenarioConfigError):
        load_scenario(path=tmp_path / "missing.json")
    path = tmp_path / "broken.json"
    path.write_text(data="{", encoding="utf-8")
    with pytest.raises(expected_exception=ScenarioConfigError):
        load_scenario(path=path)
    path.write_text(data='{"scenario": 3}', encoding="utf-8")
    with pytest.raises(expected_exception=ScenarioConfigError):
        load_scenario(path=path)


def test_parse_regimes() -> None:
    """
    Regime names ignore case.
    """
    assert parse_regimes(names=["FULL", "g1"]) == (Regime.FULL, Regime.G1)
    with pytest.raises(expected_exception=ScenarioConfigError):
        parse_regimes(names=["G3"])


def test_digest(tmp_path: Path) -> None:
    """
    The digest follows the settings.
    """
    path = write_scenario(directory=tmp_path, scenario={"grid_step": 0.5})
    config = ScenarioConfig(
        model_path=path,
        grid_step=0.5,
        out_dir=tmp_path,
    )
    same = ScenarioConfig(model_path=path, grid_step=0.5, out_dir=tmp_path)
    other = ScenarioConfig(
        model_path=path,
        grid_step=0.5,
        out_dir=tmp_path,
        mc=McSettings(seed=1),
    )
    assert config.digest() == same.digest()
    assert config.digest() != other.digest()
