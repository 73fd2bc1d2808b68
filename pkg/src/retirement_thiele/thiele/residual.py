"""
Residuals of solved reserves in their Thiele equations.

On every step ``[t_i, t_{i+1}]`` the residual is
``(W(t_{i+1}) - W(t_i)) / h - (f(t_i) + f(t_{i+1})) / 2`` where ``f`` is the
drift of the regime evaluated at the solved values. For a smooth solution
this is of order ``h**2``. Steps ending at a lump sum are left out.
"""

import logging
from dataclasses import dataclass
from typing import TypeVar

import numpy as np
import numpy.typing as npt
from beartype import beartype

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.intensities import (
    DEFAULT_OCCUPANCY_THRESHOLD,
    intensity_tables,
)
from retirement_thiele.distributions.joint_law import JointLaw
from retirement_thiele.exceptions import RegimeMismatch
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import DEAD, RETIRED
from retirement_thiele.thiele.dead import DeadDrift, dead_stage_table
from retirement_thiele.thiele.full_info import (
    FullInfoReserves,
    NodeDiagonal,
    PreRetirementDrift,
    retired_hazard,
)
from retirement_thiele.thiele.retired import (
    RetiredDrift,
    just_retired_table,
    pool_drift,
)
from retirement_thiele.thiele.rk4 import Drift, Stage
from retirement_thiele.thiele.surfaces import Curve, CurveR, Regime

LOGGER = logging.getLogger(__name__)

BoolArray = npt.NDArray[np.bool_]
_T = TypeVar("_T")


@beartype
@dataclass(frozen=True)
class ReserveSet:
    """
    Solved reserves on one grid; regimes that were not solved are ``None``.
    """

    dead: Curve
    full: FullInfoReserves | None = None
    g1: CurveR | None = None
    g2: Curve | None = None
    practice: Curve | None = None


def _step_residuals(
    values: FloatArray,
    drift: Drift,
    grid: TimeGrid,
    skipped: BoolArray,
) -> FloatArray:
    """
    The residual of every step, ``nan`` on ``skipped`` steps.
    """
    if values.ndim == 1:
        values = values[:, None]
    derivative = np.stack(
        [
            drift(
                stage=Stage(index=2 * i, time=float(t), upper=False),
                values=values[i],
            )
            for i, t in enumerate(grid.nodes)
        ],
    )
    residual = (values[1:] - values[:-1]) / grid.step - (
        derivative[1:] + derivative[:-1]
    ) / 2
    residual[skipped] = np.nan
    return residual


def _largest(residual: FloatArray) -> float:
    """
    The largest absolute finite residual, zero if there is none.

    Entries that are ``nan`` on either end of a step do not count.
    """
    finite = np.abs(residual[np.isfinite(residual)])
    if finite.size == 0:
        return 0.0
    return float(np.max(finite))


def _lump_sum_steps(spec: ModelSpec, grid: TimeGrid) -> BoolArray:
    """
    Flags for the steps that end at a lump sum in any state.
    """
    skipped = np.zeros(grid.size, dtype=np.bool_)
    for payment in spec.payments.discrete:
        node = grid.index_of(t=payment.time)
        if node > 0:
            skipped[node - 1] = True
    return skipped


def _sparse_pool_steps(
    law: JointLaw,
    grid: TimeGrid,
    threshold: float,
) -> BoolArray:
    """
    Flags for the first step and for steps where the retired pool holds at
    most ``threshold`` of the probability at either end.
    """
    pool = law.on_grid(table=law.occupation.probability(state=RETIRED))
    sparse = np.minimum(pool[1:], pool[:-1]) <= threshold
    sparse[0] = True
    return sparse


def _require(value: _T | None, regime: Regime, name: str) -> _T:
    """
    Return ``value`` or raise if the regime's surface is missing.

    Raises:
        RegimeMismatch: ``value`` is ``None``.
    """
    if value is None:
        msg = f"The {regime.value} residual needs the {name} reserve."
        raise RegimeMismatch(msg)
    return value


def _full_residuals(
    spec: ModelSpec,
    law: JointLaw | None,
    grid: TimeGrid,
    full: FullInfoReserves,
    skipped: BoolArray,
) -> dict[str, float]:
    """
    Residuals of the pre-retirement and retired full-information reserves.
    """
    dead = dead_stage_table(spec=spec, grid=grid)
    retired = full.retired.values[:, 0]
    just_retired = np.diagonal(retired, axis1=0, axis2=1).T.copy()
    pre = np.stack([curve.values for curve in full.pre], axis=1)
    diagonal = np.diagonal(pre, axis1=0, axis2=2).T.copy()
    pre_drift = PreRetirementDrift(
        spec=spec,
        entry_times=grid.nodes,
        diagonal=NodeDiagonal(values=diagonal),
        just_retired=just_retired_table(
            spec=spec,
            grid=grid,
            values=just_retired,
        ),
        dead=dead,
    )
    pre_residual = _step_residuals(
        values=pre,
        drift=pre_drift,
        grid=grid,
        skipped=skipped,
    )
    residuals = {
        curve.label: _largest(residual=pre_residual[:, j])
        for j, curve in enumerate(full.pre)
    }
    retired_residual = _step_residuals(
        values=retired,
        drift=RetiredDrift(
            spec=spec,
            hazard=retired_hazard(spec=spec, law=law, grid=grid),
            dead=dead,
        ),
        grid=grid,
        skipped=skipped,
    )
    residuals[RETIRED.label] = _largest(residual=retired_residual)
    return residuals


@beartype
def thiele_residual(
    regime: Regime,
    surfaces: ReserveSet,
    law: JointLaw | None,
    spec: ModelSpec,
    grid: TimeGrid,
    *,
    occupancy_threshold: float = DEFAULT_OCCUPANCY_THRESHOLD,
) -> dict[str, float]:
    """
    The largest absolute residual per lumped state label.

    For ``G2`` and the practice approximation, the first step and steps
    where the retired pool holds at most ``occupancy_threshold`` of the
    probability are left out: the backward rate of retirement grows like
    ``1 / t`` there.

    Raises:
        RegimeMismatch: A surface the regime needs is missing or on another
            grid, ``law`` is missing for a coarse regime, or ``regime`` has
            no residual.
    """
    if surfaces.dead.grid != grid:
        msg = "The reserves are on another grid."
        raise RegimeMismatch(msg)
    skipped = _lump_sum_steps(spec=spec, grid=grid)
    residuals = {
        DEAD.label: _largest(
            residual=_step_residuals(
                values=surfaces.dead.values,
                drift=DeadDrift(spec=spec),
                grid=grid,
                skipped=skipped,
            ),
        ),
    }
    if regime is Regime.FULL:
        full = _require(value=surfaces.full, regime=regime, name="full")
        residuals.update(
            _full_residuals(
                spec=spec,
                law=law,
                grid=grid,
                full=full,
                skipped=skipped,
            ),
        )
        return residuals
    if regime is Regime.EXTENDED:
        msg = "The extended chain has no residual check."
        raise RegimeMismatch(msg)
    law = _require(value=law, regime=regime, name="joint law")
    if regime is Regime.G1:
        g1 = _require(value=surfaces.g1, regime=regime, name="G1")
        tables = intensity_tables(spec=spec, law=law)
        residual = _step_residuals(
            values=g1.values,
            drift=RetiredDrift(
                spec=spec,
                hazard=tables.mortality_given_retirement[:, ::2],
                dead=dead_stage_table(spec=spec, grid=grid),
            ),
            grid=grid,
            skipped=skipped,
        )
        residuals[RETIRED.label] = _largest(residual=residual)
        return residuals
    pool_skipped = skipped | _sparse_pool_steps(
        law=law,
        grid=grid,
        threshold=occupancy_threshold,
    )
    if regime is Regime.G2:
        curve = _require(value=surfaces.g2, regime=regime, name="G2")
        g1 = _require(value=surfaces.g1, regime=regime, name="G1")
        drift = pool_drift(spec=spec, law=law, grid=grid, g1=g1)
    else:
        curve = _require(
            value=surfaces.practice,
            regime=regime,
            name="practice",
        )
        drift = pool_drift(spec=spec, law=law, grid=grid, g1=None)
    if curve.regime is not regime or curve.grid != grid:
        msg = (
            f"A {curve.regime.value} reserve was given for the "
            f"{regime.value} residual."
        )
        raise RegimeMismatch(msg)
    residual = _step_residuals(
        values=curve.values,
        drift=drift,
        grid=grid,
        skipped=pool_skipped,
    )
    residuals[RETIRED.label] = _largest(residual=residual)
    LOGGER.debug("Residuals of the %s reserves: %s.", regime.value, residuals)
    return residuals
