"""
Scenario files: a model file with a ``scenario`` object.

Example::

    {
        "sigma": 1,
        "horizon": 10,
        "intensities": [...],
        "payments": {...},
        "scenario": {
            "grid_step": 0.1,
            "regimes": ["full", "G1", "G2", "practice"],
            "checks": ["residual", "identity", "tower", "oracle"],
            "mc": {"paths": 20000, "seed": 1},
            "out_dir": "results"
        }
    }

A ``model`` entry in ``scenario`` points to a separate model file, relative
to the scenario file.
"""

import hashlib
import json
import logging
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from beartype import beartype

from retirement_thiele.exceptions import ScenarioConfigError
from retirement_thiele.mc_oracle.estimators import DEFAULT_MIN_EFFECTIVE
from retirement_thiele.mc_oracle.paths import DEFAULT_BLOCK_SIZE
from retirement_thiele.thiele.surfaces import Regime

LOGGER = logging.getLogger(__name__)

SCENARIO_REGIMES = (Regime.FULL, Regime.G1, Regime.G2, Regime.PRACTICE)
CHECKS = ("residual", "identity", "tower", "oracle")
_BIN_STEPS = 5


@beartype
@dataclass(frozen=True)
class McSettings:
    """
    Settings of the Monte Carlo oracle.

    Attributes:
        bandwidth: The window of the intensity estimates.
        eta_bin_width: The width of retirement time bins, five grid steps
            when ``None``.
        uh_bin_width: The width of bins of the last pre-retirement sojourn
            and of entry times, five grid steps when ``None``.
        workers: Threads used for sampling, chosen by the executor when
            ``None``.
    """

    paths: int = 10_000
    seed: int = 0
    bandwidth: float = 0.25
    eta_bin_width: float | None = None
    uh_bin_width: float | None = None
    min_effective: int = DEFAULT_MIN_EFFECTIVE
    block_size: int = DEFAULT_BLOCK_SIZE
    workers: int | None = None


@beartype
@dataclass(frozen=True)
class Thresholds:
    """
    The thresholds of the checks.

    Attributes:
        residual: The largest Thiele residual allowed.
        identity: The largest relative discrepancy of the backward rates.
        tower: The largest tower gap relative to the largest ``W2``.
        z_score: The largest absolute z-score of a passing comparison.
        z_fraction: The smallest fraction of comparisons which must pass.
    """

    residual: float = 1e-3
    identity: float = 1e-3
    tower: float = 5e-3
    z_score: float = 3.0
    z_fraction: float = 0.99


@beartype
@dataclass(frozen=True)
class ScenarioConfig:
    """
    Everything needed to run a scenario.

    Attributes:
        times: Times of the Monte Carlo comparisons, ``0, n/4, n/2, 3n/4``
            when ``None``.
    """

    model_path: Path
    grid_step: float
    out_dir: Path
    regimes: tuple[Regime, ...] = SCENARIO_REGIMES
    checks: tuple[str, ...] = CHECKS
    mc: McSettings = field(default_factory=McSettings)
    thresholds: Thresholds = field(default_factory=Thresholds)
    times: tuple[float, ...] | None = None
    dump_paths: bool = False

    def __post_init__(self) -> None:
        """
        Check the settings.

        Raises:
            ScenarioConfigError: A setting is out of range.
        """
        problems = []
        if not self.grid_step > 0:
            problems.append(
                f"grid_step must be positive, got {self.grid_step}",
            )
        if not self.regimes:
            problems.append("regimes must not be empty")
        if len(set(self.regimes)) != len(self.regimes):
            problems.append("regimes must not repeat")
        if unknown := [
            regime.value
            for regime in self.regimes
            if regime not in SCENARIO_REGIMES
        ]:
            problems.append(f"regimes without a scenario run {unknown}")
        if unknown_checks := sorted(set(self.checks) - set(CHECKS)):
            problems.append(f"unknown checks {unknown_checks}")
        if self.mc.paths < 1:
            problems.append(f"mc.paths must be positive, got {self.mc.paths}")
        if not self.mc.bandwidth > 0:
            problems.append("mc.bandwidth must be positive")
        widths = (self.mc.eta_bin_width, self.mc.uh_bin_width)
        if any(width is not None and not width > 0 for width in widths):
            problems.append("bin widths must be positive")
        if self.mc.block_size < 1:
            problems.append("mc.block_size must be at least 1")
        if self.mc.workers is not None and self.mc.workers < 1:
            problems.append("mc.workers must be at least 1")
        if self.times is not None and any(time < 0 for time in self.times):
            problems.append("times must not be negative")
        if problems:
            msg = "Invalid scenario: " + "; ".join(problems) + "."
            raise ScenarioConfigError(msg)

    @property
    def eta_bin_width(self) -> float:
        """
        The width of retirement time bins.
        """
        if self.mc.eta_bin_width is None:
            return _BIN_STEPS * self.grid_step
        return self.mc.eta_bin_width

    @property
    def uh_bin_width(self) -> float:
        """
        The width of pre-retirement sojourn and entry time bins.
        """
        if self.mc.uh_bin_width is None:
            return _BIN_STEPS * self.grid_step
        return self.mc.uh_bin_width

    def to_mapping(self) -> dict[str, Any]:
        """
        The settings as JSON-compatible values.
        """
        return {
            "model_path": self.model_path.as_posix(),
            "grid_step": self.grid_step,
            "out_dir": self.out_dir.as_posix(),
            "regimes": [regime.value for regime in self.regimes],
            "checks": list(self.checks),
            "mc": asdict(self.mc),
            "thresholds": asdict(self.thresholds),
            "times": None if self.times is None else list(self.times),
            "dump_paths": self.dump_paths,
        }

    def digest(self) -> str:
        """
        The SHA-256 of the settings and of the model file.
        """
        settings = json.dumps(self.to_mapping(), sort_keys=True)
        hasher = hashlib.sha256(settings.encode("utf-8"))
        hasher.update(self.model_path.read_bytes())
        return hasher.hexdigest()


@beartype
def parse_regimes(names: Sequence[str]) -> tuple[Regime, ...]:
    """
    Regimes from their names, ignoring case.

    Raises:
        ScenarioConfigError: A name is not a scenario regime.
    """
    by_name = {regime.value.lower(): regime for regime in SCENARIO_REGIMES}
    regimes = []
    for name in names:
        regime = by_name.get(name.strip().lower())
        if regime is None:
            known = ", ".join(regime.value for regime in SCENARIO_REGIMES)
            msg = f"Unknown regime {name!r}, expected one of {known}."
            raise ScenarioConfigError(msg)
        regimes.append(regime)
    return tuple(regimes)


_MC_TYPES: dict[str, type[int] | type[float]] = {
    "paths": int,
    "seed": int,
    "bandwidth": float,
    "eta_bin_width": float,
    "uh_bin_width": float,
    "min_effective": int,
    "block_size": int,
    "workers": int,
}
_THRESHOLD_TYPES: dict[str, type[int] | type[float]] = {
    name: float for name in Thresholds.__dataclass_fields__
}


def _typed_settings(
    entry: object,
    types: Mapping[str, type[int] | type[float]],
    name: str,
) -> dict[str, Any]:
    """
    Numeric settings from a JSON object, with ``null`` kept as ``None``.

    Raises:
        ScenarioConfigError: ``entry`` is not an object or has unknown keys.
        ValueError: A value is not a number.
    """
    if not isinstance(entry, dict):
        msg = f"{name} must be a JSON object."
        raise ScenarioConfigError(msg)
    if unknown := sorted(set(entry) - set(types)):
        msg = f"Unknown {name} settings {unknown}."
        raise ScenarioConfigError(msg)
    return {
        key: None if value is None else types[key](value)
        for key, value in entry.items()
    }


@beartype
def load_scenario(
    path: Path,
    *,
    overrides: Mapping[str, Any] | None = None,
) -> ScenarioConfig:
    """
    Read a scenario file.

    ``overrides`` replaces settings read from the file. Its keys are
    ``grid_step``, ``regimes``, ``checks``, ``out_dir``, ``dump_paths`` and
    the Monte Carlo keys ``paths`` and ``seed``.

    Raises:
        ScenarioConfigError: The file cannot be read, or a setting is
            missing or invalid.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        msg = f"Cannot read scenario file {path}: {exc}"
        raise ScenarioConfigError(msg) from exc
    scenario = data.get("scenario", {}) if isinstance(data, dict) else None
    if not isinstance(scenario, dict):
        msg = f"The scenario in {path} must be a JSON object."
        raise ScenarioConfigError(msg)
    settings = {**scenario, **(overrides or {})}
    try:
        mc = McSettings(
            **_typed_settings(
                entry={
                    **scenario.get("mc", {}),
                    **{
                        key: value
                        for key, value in (overrides or {}).items()
                        if key in {"paths", "seed"}
                    },
                },
                types=_MC_TYPES,
                name="mc",
            ),
        )
        thresholds = Thresholds(
            **_typed_settings(
                entry=scenario.get("thresholds", {}),
                types=_THRESHOLD_TYPES,
                name="thresholds",
            ),
        )
        times = settings.get("times")
        config = ScenarioConfig(
            model_path=path.parent / settings.get("model", path.name),
            grid_step=float(settings["grid_step"]),
            out_dir=Path(settings.get("out_dir", "results")),
            regimes=parse_regimes(
                names=[
                    str(name)
                    for name in settings.get(
                        "regimes",
                        [regime.value for regime in SCENARIO_REGIMES],
                    )
                ],
            ),
            checks=tuple(str(name) for name in settings.get("checks", CHECKS)),
            mc=mc,
            thresholds=thresholds,
            times=None if times is None else tuple(map(float, times)),
            dump_paths=bool(settings.get("dump_paths", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"Invalid scenario in {path}: {exc!r}"
        raise ScenarioConfigError(msg) from exc
    LOGGER.debug("Loaded scenario %s.", config.to_mapping())
    return config
