"""
Run a scenario: solve the reserves, sample paths, compare and check.

Every artifact is written below the output directory:

* ``reserves/``: one CSV per solved reserve surface and the sums at risk.
* ``intensities/``: the rates of the retired pool.
* ``comparisons/``: analytic values next to Monte Carlo estimates.
* ``checks.csv``, ``headline.csv`` and ``manifest.json``.

The same sampled paths serve every regime.
"""

import hashlib
import importlib.metadata
import json
import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np
import pandas as pd
from beartype import beartype

from retirement_thiele.cli.config import ScenarioConfig
from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.intensities import (
    backward_identity_check,
    intensity_tables,
    mu2,
    mu_bar,
)
from retirement_thiele.distributions.joint_law import JointLaw, joint_law
from retirement_thiele.exceptions import EmptyConditioning, ReserveEngineError
from retirement_thiele.mc_oracle.conditioning import (
    Bin,
    ConditioningSpec,
    InState,
    RetiredIn,
    RetiredWithHistory,
)
from retirement_thiele.mc_oracle.estimators import (
    McEstimate,
    estimate_backward_intensity,
    estimate_forward_intensity,
    estimate_reserve,
)
from retirement_thiele.mc_oracle.outflow import (
    PaymentIntegrals,
    payment_integrals,
)
from retirement_thiele.mc_oracle.paths import (
    PathSet,
    dump_paths,
    simulate_paths,
)
from retirement_thiele.model.config import load_model
from retirement_thiele.model.spec import ModelSpec, validate_model
from retirement_thiele.model.states import DEAD, RETIRED
from retirement_thiele.thiele.dead import solve_dead_reserve
from retirement_thiele.thiele.export import write_csv, write_surface
from retirement_thiele.thiele.full_info import solve_full_info
from retirement_thiele.thiele.residual import ReserveSet, thiele_residual
from retirement_thiele.thiele.retired import (
    PracticeResult,
    solve_g1,
    solve_g2,
    solve_practice_approx,
)
from retirement_thiele.thiele.risk import sums_at_risk
from retirement_thiele.thiele.surfaces import (
    Curve,
    CurveR,
    Regime,
    ReserveSurface,
)
from retirement_thiele.thiele.tower import tower_gap

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2

HEADLINE_FRACTIONS = (0.0, 0.25, 0.5, 0.75)
_EXACT_MATCH = 1e-6
_VERSIONED = ("retirement-thiele", "numpy", "scipy", "pandas")
_ORACLE_REGIMES = (Regime.FULL, Regime.G1, Regime.G2)


@beartype
@dataclass(frozen=True)
class CheckResult:
    """
    One check with the value it measured.
    """

    check: str
    regime: str
    value: float
    threshold: float
    passed: bool


@beartype
@dataclass(frozen=True)
class ScenarioResult:
    """
    The outcome of a run.

    Attributes:
        files: Every file written, relative to ``out_dir``.
    """

    exit_code: int
    out_dir: Path
    checks: tuple[CheckResult, ...] = ()
    files: tuple[Path, ...] = ()


@dataclass
class _Artifacts:
    """
    Files written during a run.
    """

    out_dir: Path
    files: list[Path] = field(default_factory=list)

    def table(self, frame: pd.DataFrame, name: str) -> None:
        """
        Write a table.
        """
        self.files.append(write_csv(frame=frame, path=self.out_dir / name))


@dataclass(frozen=True)
class _Analytic:
    """
    The solved reserves of a run.
    """

    spec: ModelSpec
    grid: TimeGrid
    law: JointLaw | None
    reserves: ReserveSet
    practice: PracticeResult | None


def _node_times(grid: TimeGrid, config: ScenarioConfig) -> tuple[float, ...]:
    """
    The comparison times, checked to be nodes.

    Raises:
        GridMisaligned: A time is not a node.
    """
    if config.times is None:
        return tuple(
            float(grid.nodes[round(fraction * grid.size)])
            for fraction in HEADLINE_FRACTIONS
        )
    return tuple(
        float(grid.nodes[grid.index_of(t=time)]) for time in config.times
    )


def _solve(
    spec: ModelSpec,
    grid: TimeGrid,
    config: ScenarioConfig,
) -> _Analytic:
    """
    Solve the reserves of the requested regimes and those the checks need.

    Raises:
        NonMarkovPreRetirement: A coarse regime is requested but the
            pre-retirement rates depend on the duration.
    """
    regimes = set(config.regimes)
    need_g2 = bool(regimes & {Regime.G2, Regime.PRACTICE}) or (
        "tower" in config.checks
    )
    need_g1 = need_g2 or Regime.G1 in regimes
    need_law = need_g1 or "identity" in config.checks
    law = joint_law(spec=spec, grid=grid) if need_law else None
    dead = solve_dead_reserve(spec=spec, grid=grid)
    full = (
        solve_full_info(spec=spec, law=law, grid=grid)
        if Regime.FULL in regimes
        else None
    )
    g1: CurveR | None = None
    g2: Curve | None = None
    practice = None
    if law is not None and need_g1:
        g1 = solve_g1(spec=spec, law=law, grid=grid)
    if law is not None and need_g2:
        g2 = solve_g2(spec=spec, law=law, grid=grid, g1=g1)
    if law is not None and Regime.PRACTICE in regimes:
        practice = solve_practice_approx(
            spec=spec,
            law=law,
            grid=grid,
            g1=g1,
            g2=g2,
        )
    LOGGER.info("Solved the reserves on %d steps.", grid.size)
    return _Analytic(
        spec=spec,
        grid=grid,
        law=law,
        reserves=ReserveSet(
            dead=dead,
            full=full,
            g1=g1,
            g2=g2,
            practice=None if practice is None else practice.curve,
        ),
        practice=practice,
    )


def _write_reserves(analytic: _Analytic, artifacts: _Artifacts) -> None:
    """
    Write every solved surface and the sums at risk.
    """
    reserves = analytic.reserves
    surfaces: dict[str, ReserveSurface] = {"reserves/dead.csv": reserves.dead}
    if reserves.full is not None:
        pre_states = analytic.spec.states.lumped_states[: analytic.spec.sigma]
        for state, curve in zip(pre_states, reserves.full.pre, strict=True):
            surfaces[f"reserves/full_{state.label}.csv"] = curve
        surfaces["reserves/full_p.csv"] = reserves.full.retired
    if reserves.g1 is not None:
        surfaces["reserves/g1.csv"] = reserves.g1
    if reserves.g2 is not None:
        surfaces["reserves/g2.csv"] = reserves.g2
    if analytic.practice is not None:
        surfaces["reserves/practice.csv"] = analytic.practice.curve
        surfaces["reserves/practice_gap_g2.csv"] = analytic.practice.gap_g2
        surfaces["reserves/practice_gap_g1.csv"] = analytic.practice.gap_g1
    for name, surface in surfaces.items():
        artifacts.files.append(
            write_surface(surface=surface, path=artifacts.out_dir / name),
        )
    law = analytic.law
    if (
        law is None
        or reserves.full is None
        or reserves.g1 is None
        or reserves.g2 is None
    ):
        return
    risk = sums_at_risk(
        spec=analytic.spec,
        law=law,
        full=reserves.full,
        g1=reserves.g1,
        g2=reserves.g2,
    )
    columns = {"t": analytic.grid.nodes}
    for (source, target), values in sorted(risk.forward.items()):
        columns[f"forward_{source}_{target}"] = values
    columns["adjustment"] = risk.adjustment
    for k in range(analytic.spec.sigma):
        columns[f"adjustment_{k + 1}"] = risk.adjustment_by_state[:, k]
    artifacts.table(
        frame=pd.DataFrame(data=columns),
        name="reserves/sums_at_risk.csv",
    )


def _write_intensities(analytic: _Analytic, artifacts: _Artifacts) -> None:
    """
    Write the rates of the retired pool when the joint law was computed.
    """
    law = analytic.law
    if law is None:
        return
    tables = intensity_tables(spec=analytic.spec, law=law)
    columns = {
        "t": analytic.grid.nodes,
        "mu2": law.on_grid(table=tables.mortality_retired),
        "mu_bar": law.on_grid(table=tables.retirement_backward),
    }
    by_state = law.on_grid(table=tables.retirement_backward_by_state)
    for k in range(analytic.spec.sigma):
        columns[f"mu_bar_{k + 1}"] = by_state[:, k]
    artifacts.table(
        frame=pd.DataFrame(data=columns),
        name="intensities/retired.csv",
    )
    mu1 = CurveR(
        grid=analytic.grid,
        values=tables.mortality_given_retirement[::2, ::2],
        regime=Regime.G1,
        label="mu1",
    )
    artifacts.files.append(
        write_surface(
            surface=mu1,
            path=artifacts.out_dir / "intensities/mu1.csv",
        ),
    )


@beartype
@dataclass(frozen=True)
class _Comparison:
    """
    An analytic value and the event of its Monte Carlo estimate.
    """

    t: float
    analytic: float
    cond: ConditioningSpec
    event: str


def _z_score(estimate: McEstimate, analytic: float) -> float:
    """
    The z-score of ``analytic``, zero for an exact match of a
    deterministic estimate.
    """
    close = abs(estimate.mean - analytic) <= _EXACT_MATCH * (
        1 + abs(analytic)
    )
    if estimate.standard_error == 0 and close:
        return 0.0
    return estimate.z_score(value=analytic)


def _compare(
    comparisons: Iterable[_Comparison],
    paths: PathSet,
    analytic: _Analytic,
    integrals: PaymentIntegrals,
    config: ScenarioConfig,
) -> pd.DataFrame:
    """
    Estimate the reserve of every comparison.
    """
    rows = []
    for comparison in comparisons:
        try:
            estimate = estimate_reserve(
                paths=paths,
                cond=comparison.cond,
                payments=analytic.spec.payments,
                discount=analytic.spec.discount,
                integrals=integrals,
                min_effective=config.mc.min_effective,
            )
        except EmptyConditioning:
            LOGGER.debug("No path for %s.", comparison.event)
            mean = error = score = np.nan
            count = 0
        else:
            mean, error = estimate.mean, estimate.standard_error
            score = _z_score(estimate=estimate, analytic=comparison.analytic)
            count = estimate.n_effective
        rows.append(
            {
                "t": comparison.t,
                "analytic": comparison.analytic,
                "mc_mean": mean,
                "mc_se": error,
                "z_score": score,
                "n_effective": count,
                "event": comparison.event,
            },
        )
    return pd.DataFrame(
        data=rows,
        columns=[
            "t",
            "analytic",
            "mc_mean",
            "mc_se",
            "z_score",
            "n_effective",
            "event",
        ],
    )


def _centered(center: float, width: float) -> Bin:
    """
    The bin of ``width`` around ``center``.
    """
    return Bin(lower=center - width / 2, upper=center + width / 2)


def _full_comparisons(
    analytic: _Analytic,
    times: tuple[float, ...],
    config: ScenarioConfig,
) -> list[_Comparison]:
    """
    Pre-retirement reserves given the entry time, and retired reserves
    given the retirement time and the state retired from.
    """
    full = analytic.reserves.full
    if full is None:
        return []
    grid, states = analytic.grid, analytic.spec.states
    pre_states = states.lumped_states[: analytic.spec.sigma]
    initial = analytic.spec.initial_distribution()
    comparisons = []
    for t in times:
        i = grid.index_of(t=t)
        for state, curve in zip(pre_states, full.pre, strict=True):
            position = states.extended_position(state=state)
            s = 0.0 if initial[position] > 0 else float(grid.nodes[i // 2])
            comparisons.append(
                _Comparison(
                    t=t,
                    analytic=curve.at(t=t, s=s),
                    cond=InState(
                        time=t,
                        state=state,
                        entered=Bin(lower=s, upper=s + config.uh_bin_width),
                    ),
                    event=f"Z={state.label},s={s:g}",
                ),
            )
        if t < config.eta_bin_width:
            continue
        r = float(grid.nodes[i // 2])
        for k in range(1, analytic.spec.sigma + 1):
            duration = (
                None
                if full.retired.s_collapsed
                else _centered(center=r, width=config.uh_bin_width)
            )
            comparisons.append(
                _Comparison(
                    t=t,
                    analytic=full.retired.at(t=t, r=r, k=k, s=0.0),
                    cond=RetiredWithHistory(
                        time=t,
                        retirement=_centered(
                            center=r,
                            width=config.eta_bin_width,
                        ),
                        retired_from=k,
                        pre_duration=duration,
                    ),
                    event=f"Z=p,r={r:g},H={k}",
                ),
            )
    return comparisons


def _coarse_comparisons(
    regime: Regime,
    analytic: _Analytic,
    times: tuple[float, ...],
    config: ScenarioConfig,
) -> list[_Comparison]:
    """
    Retired reserves given the retirement time, or given retirement only.
    """
    reserves = analytic.reserves
    grid = analytic.grid
    comparisons = []
    for t in times:
        if regime is Regime.G1 and reserves.g1 is not None:
            if t < config.eta_bin_width:
                continue
            r = float(grid.nodes[grid.index_of(t=t) // 2])
            comparisons.append(
                _Comparison(
                    t=t,
                    analytic=reserves.g1.at(t=t, r=r),
                    cond=RetiredIn(
                        time=t,
                        retirement=_centered(
                            center=r,
                            width=config.eta_bin_width,
                        ),
                    ),
                    event=f"Z=p,r={r:g}",
                ),
            )
            continue
        curve = reserves.g2 if regime is Regime.G2 else reserves.practice
        if curve is None:
            continue
        comparisons.append(
            _Comparison(
                t=t,
                analytic=curve.at(t=t),
                cond=InState(time=t, state=RETIRED),
                event="Z=p",
            ),
        )
    return comparisons


def _rate_row(
    name: str,
    t: float,
    analytic: float,
    estimate_at: Callable[[], McEstimate],
) -> dict[str, str | float]:
    """
    One analytic rate next to its estimate.
    """
    try:
        estimate = estimate_at()
    except EmptyConditioning:
        mean = error = score = np.nan
    else:
        mean, error = estimate.mean, estimate.standard_error
        score = _z_score(estimate=estimate, analytic=analytic)
    return {
        "t": t,
        "rate": name,
        "analytic": analytic,
        "mc_mean": mean,
        "mc_se": error,
        "z_score": score,
    }


def _intensity_rows(
    law: JointLaw,
    paths: PathSet,
    times: tuple[float, ...],
    config: ScenarioConfig,
) -> pd.DataFrame:
    """
    The death rate of the retired pool and the backward rate of having
    just retired, analytic and estimated.
    """
    bandwidth = config.mc.bandwidth
    rows = []
    for t in times:
        if t < paths.horizon:
            rows.append(
                _rate_row(
                    name="mu2",
                    t=t,
                    analytic=mu2(law=law, t=t),
                    estimate_at=partial(
                        estimate_forward_intensity,
                        paths=paths,
                        source=RETIRED,
                        target=DEAD,
                        t=t,
                        bandwidth=bandwidth,
                        min_effective=config.mc.min_effective,
                    ),
                ),
            )
        if t >= bandwidth:
            rows.append(
                _rate_row(
                    name="mu_bar",
                    t=t,
                    analytic=mu_bar(law=law, t=t),
                    estimate_at=partial(
                        estimate_backward_intensity,
                        paths=paths,
                        source=None,
                        target=RETIRED,
                        t=t,
                        bandwidth=bandwidth,
                        min_effective=config.mc.min_effective,
                    ),
                ),
            )
    return pd.DataFrame(
        data=rows,
        columns=["t", "rate", "analytic", "mc_mean", "mc_se", "z_score"],
    )


def _oracle_check(
    regime: Regime,
    frame: pd.DataFrame,
    config: ScenarioConfig,
) -> CheckResult:
    """
    The fraction of reliable comparisons within the z-score threshold.
    """
    counted = frame[
        np.isfinite(frame["z_score"])
        & (frame["n_effective"] >= config.mc.min_effective)
    ]
    fraction = (
        float(np.mean(np.abs(counted["z_score"]) <= config.thresholds.z_score))
        if len(counted)
        else 1.0
    )
    return CheckResult(
        check="oracle",
        regime=regime.value,
        value=fraction,
        threshold=config.thresholds.z_fraction,
        passed=fraction >= config.thresholds.z_fraction,
    )


def _run_oracle(
    analytic: _Analytic,
    paths: PathSet,
    config: ScenarioConfig,
    artifacts: _Artifacts,
) -> list[CheckResult]:
    """
    Write the comparisons of every regime and check the reserves.
    """
    times = _node_times(grid=analytic.grid, config=config)
    integrals = payment_integrals(
        payments=analytic.spec.payments,
        discount=analytic.spec.discount,
        grid=analytic.grid,
    )
    checks = []
    for regime in config.regimes:
        if regime is Regime.FULL:
            comparisons = _full_comparisons(
                analytic=analytic,
                times=times,
                config=config,
            )
        else:
            comparisons = _coarse_comparisons(
                regime=regime,
                analytic=analytic,
                times=times,
                config=config,
            )
        frame = _compare(
            comparisons=comparisons,
            paths=paths,
            analytic=analytic,
            integrals=integrals,
            config=config,
        )
        artifacts.table(
            frame=frame,
            name=f"comparisons/{regime.value.lower()}.csv",
        )
        if "oracle" in config.checks and regime in _ORACLE_REGIMES:
            checks.append(
                _oracle_check(regime=regime, frame=frame, config=config),
            )
    if analytic.law is not None:
        artifacts.table(
            frame=_intensity_rows(
                law=analytic.law,
                paths=paths,
                times=times,
                config=config,
            ),
            name="comparisons/intensities.csv",
        )
    return checks


def _analytic_checks(
    analytic: _Analytic,
    config: ScenarioConfig,
) -> list[CheckResult]:
    """
    The residual, backward identity and tower checks.
    """
    thresholds = config.thresholds
    checks = []
    if "residual" in config.checks:
        for regime in config.regimes:
            residuals = thiele_residual(
                regime=regime,
                surfaces=analytic.reserves,
                law=analytic.law,
                spec=analytic.spec,
                grid=analytic.grid,
            )
            largest = max(residuals.values())
            checks.append(
                CheckResult(
                    check="residual",
                    regime=regime.value,
                    value=largest,
                    threshold=thresholds.residual,
                    passed=largest <= thresholds.residual,
                ),
            )
    law = analytic.law
    if "identity" in config.checks and law is not None:
        discrepancy = backward_identity_check(
            spec=analytic.spec,
            law=law,
            occupation=law.occupation,
        )
        checks.append(
            CheckResult(
                check="identity",
                regime=Regime.G2.value,
                value=discrepancy,
                threshold=thresholds.identity,
                passed=discrepancy <= thresholds.identity,
            ),
        )
    g1, g2 = analytic.reserves.g1, analytic.reserves.g2
    if (
        "tower" in config.checks
        and law is not None
        and g1 is not None
        and g2 is not None
    ):
        gap = float(np.max(np.abs(tower_gap(g1=g1, g2=g2, law=law).values)))
        allowed = thresholds.tower * float(np.max(np.abs(g2.values)))
        checks.append(
            CheckResult(
                check="tower",
                regime=Regime.G2.value,
                value=gap,
                threshold=allowed,
                passed=gap <= allowed,
            ),
        )
    for check in checks:
        if not check.passed:
            LOGGER.warning(
                "The %s check of %s failed: %.6g above %.6g.",
                check.check,
                check.regime,
                check.value,
                check.threshold,
            )
    return checks


def _headline(analytic: _Analytic) -> pd.DataFrame:
    """
    The retired reserves just after retirement at quarters of the contract.
    """
    grid, reserves = analytic.grid, analytic.reserves
    indices = [round(fraction * grid.size) for fraction in HEADLINE_FRACTIONS]
    columns = {"t": grid.nodes[indices], "dead": reserves.dead.values[indices]}
    if reserves.full is not None:
        for k in range(1, analytic.spec.sigma + 1):
            columns[f"full_H{k}"] = reserves.full.just_retired(k=k)[indices]
    if reserves.g1 is not None:
        columns["g1"] = reserves.g1.diagonal()[indices]
    if reserves.g2 is not None:
        columns["g2"] = reserves.g2.values[indices]
    if reserves.practice is not None:
        columns["practice"] = reserves.practice.values[indices]
    return pd.DataFrame(data=columns)


def _versions() -> dict[str, str]:
    """
    Versions of this package and of the numerical libraries.
    """
    versions: dict[str, str] = {}
    for name in _VERSIONED:
        try:
            versions[name] = importlib.metadata.version(name)
        except importlib.metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def _write_manifest(config: ScenarioConfig, artifacts: _Artifacts) -> None:
    """
    Write the settings digest, the versions and the digest of every file.
    """
    manifest = {
        "config_sha256": config.digest(),
        "seed": config.mc.seed,
        "paths": config.mc.paths,
        "grid_step": config.grid_step,
        "versions": _versions(),
        "files": {
            path.relative_to(artifacts.out_dir).as_posix(): hashlib.sha256(
                path.read_bytes(),
            ).hexdigest()
            for path in sorted(artifacts.files)
        },
    }
    path = artifacts.out_dir / "manifest.json"
    path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    artifacts.files.append(path)


def _prepare(config: ScenarioConfig) -> tuple[ModelSpec, TimeGrid]:
    """
    Load and validate the model and build the grid.

    Raises:
        ReserveEngineError: The model is invalid or the grid does not fit.
        ValueError: The grid step is not positive.
    """
    spec = validate_model(spec=load_model(path=config.model_path))
    grid = TimeGrid(horizon=spec.horizon, step=config.grid_step)
    grid.check_payments(payments=spec.payments)
    _node_times(grid=grid, config=config)
    return spec, grid


def _write_results(
    analytic: _Analytic,
    paths: PathSet,
    config: ScenarioConfig,
    artifacts: _Artifacts,
) -> list[CheckResult]:
    """
    Write the reserves, run the checks and write the comparisons.

    Raises:
        ReserveEngineError: A check cannot be computed on these reserves.
    """
    _write_reserves(analytic=analytic, artifacts=artifacts)
    _write_intensities(analytic=analytic, artifacts=artifacts)
    checks = _analytic_checks(analytic=analytic, config=config)
    checks += _run_oracle(
        analytic=analytic,
        paths=paths,
        config=config,
        artifacts=artifacts,
    )
    if config.dump_paths:
        artifacts.files.append(
            dump_paths(paths=paths, path=config.out_dir / "paths.csv"),
        )
    artifacts.table(
        frame=pd.DataFrame(
            data=[
                {
                    "check": check.check,
                    "regime": check.regime,
                    "value": check.value,
                    "threshold": check.threshold,
                    "passed": check.passed,
                }
                for check in checks
            ],
            columns=["check", "regime", "value", "threshold", "passed"],
        ),
        name="checks.csv",
    )
    artifacts.table(frame=_headline(analytic=analytic), name="headline.csv")
    _write_manifest(config=config, artifacts=artifacts)
    return checks


@beartype
def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """
    Solve, sample, compare and check one scenario.

    Paths are sampled while the reserves are solved. The exit code is
    ``EXIT_OK`` when every enabled check passes, ``EXIT_CHECK_FAILED`` when
    a check fails (every artifact is still written) and ``EXIT_INVALID``
    when the model or the settings are invalid, or when the reserves cannot
    be checked.
    """
    artifacts = _Artifacts(out_dir=config.out_dir)
    try:
        spec, grid = _prepare(config=config)
        with ThreadPoolExecutor(max_workers=1) as executor:
            sampling = executor.submit(
                simulate_paths,
                spec=spec,
                n_paths=config.mc.paths,
                seed=config.mc.seed,
                block_size=config.mc.block_size,
                workers=config.mc.workers,
            )
            analytic = _solve(spec=spec, grid=grid, config=config)
            paths = sampling.result()
        checks = _write_results(
            analytic=analytic,
            paths=paths,
            config=config,
            artifacts=artifacts,
        )
    except (ReserveEngineError, ValueError) as exc:
        LOGGER.error("Invalid scenario: %s", exc)  # noqa: TRY400
        return ScenarioResult(exit_code=EXIT_INVALID, out_dir=config.out_dir)
    passed = all(check.passed for check in checks)
    LOGGER.info(
        "Wrote %d files to %s; %d of %d checks passed.",
        len(artifacts.files),
        config.out_dir,
        sum(check.passed for check in checks),
        len(checks),
    )
    return ScenarioResult(
        exit_code=EXIT_OK if passed else EXIT_CHECK_FAILED,
        out_dir=config.out_dir,
        checks=tuple(checks),
        files=tuple(
            path.relative_to(config.out_dir) for path in artifacts.files
        ),
    )
