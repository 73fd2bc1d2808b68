"""
Reserves of the retired state under coarse information.

Under ``G1`` the insurer knows the retirement time ``r`` and sets
``W1(t, r)``; under ``G2`` only the fact of retirement is known and the
reserve ``W2(t)`` picks up a backward term for the retirement that might
just have occurred. Practitioners drop that term.
"""

import logging
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.intensities import intensity_tables
from retirement_thiele.distributions.joint_law import JointLaw, safe_ratio
from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import DEAD, RETIRED
from retirement_thiele.thiele.dead import dead_stage_table, lump_sum_jumps
from retirement_thiele.thiele.rk4 import (
    Stage,
    StageTable,
    integrate_backward,
    stage_table_from_nodes,
)
from retirement_thiele.thiele.surfaces import Curve, CurveR, Regime

LOGGER = logging.getLogger(__name__)


@beartype
def require_grid(law: JointLaw, grid: TimeGrid, spec: ModelSpec) -> None:
    """
    Check that ``law`` was tabulated on ``grid`` and that the lump sums of
    ``spec`` fall on its nodes.

    Raises:
        GridMisaligned: The grids differ or a lump sum is off the grid.
    """
    if law.grid != grid:
        msg = (
            f"The law is tabulated with step {law.grid.step} up to "
            f"{law.grid.horizon}, the reserve grid has step {grid.step} up "
            f"to {grid.horizon}."
        )
        raise GridMisaligned(msg)
    grid.check_payments(payments=spec.payments)


def _retired_jumps(
    spec: ModelSpec,
    grid: TimeGrid,
    shape: tuple[int, ...],
) -> dict[int, FloatArray]:
    """
    Lump sums paid in ``p`` as jumps of an array of retired reserves.
    """
    return {
        node: np.full(shape, amount)
        for node, amount in lump_sum_jumps(
            payments=spec.payments,
            grid=grid,
            state=RETIRED,
        ).items()
    }


@beartype
@dataclass(frozen=True)
class RetiredDrift:
    """
    ``W' = r W - b_p - (b_pd + W_d - W) mu`` for retired reserves.

    ``hazard[S]`` is the death rate at stage node ``S``, broadcast against
    the reserves. With ``just_retired`` and ``backward`` the backward term
    ``(W1(t, t) - W) mu_bar`` is added.
    """

    spec: ModelSpec
    hazard: FloatArray
    dead: StageTable
    just_retired: StageTable | None = None
    backward: FloatArray | None = None

    def __call__(self, stage: Stage, values: FloatArray) -> FloatArray:
        """
        The drift at ``stage``.
        """
        t = stage.time
        payments = self.spec.payments
        rate = float(self.spec.discount.rate(t=t))
        sojourn = float(payments.sojourn_rate(state=RETIRED, t=t))
        on_death = float(
            payments.transition_amount(source=RETIRED, target=DEAD, t=t),
        )
        at_risk = on_death + self.dead.at(stage=stage) - values
        change = rate * values - sojourn - at_risk * self.hazard[stage.index]
        if self.just_retired is None or self.backward is None:
            return change
        adjustment = self.just_retired.at(stage=stage) - values
        return change + adjustment * self.backward[stage.index]


@beartype
def solve_retired_characteristics(
    spec: ModelSpec,
    grid: TimeGrid,
    *,
    hazard: FloatArray,
    dead: StageTable,
) -> FloatArray:
    """
    Solve the retired reserve along every retirement node at once.

    ``hazard[S, j, ...]`` is the death rate at stage node ``S`` after
    retirement at node ``j`` of ``grid``. Returns ``values[i, j, ...]`` with
    ``nan`` where ``j > i``.
    """
    shape = hazard.shape[1:]
    values = integrate_backward(
        grid=grid,
        terminal=np.zeros(shape),
        drift=RetiredDrift(spec=spec, hazard=hazard, dead=dead),
        jumps=_retired_jumps(spec=spec, grid=grid, shape=shape),
    )
    index = np.arange(grid.size + 1)
    before_retirement = index[None, :] > index[:, None]
    values[before_retirement] = np.nan
    return values


@beartype
def solve_g1(spec: ModelSpec, law: JointLaw, grid: TimeGrid) -> CurveR:
    """
    The retired reserve ``W1(t, r)`` given retirement at ``r``.

    Each retirement node is a characteristic solved backward from zero at
    the horizon with the death rate given the retirement time.

    Raises:
        GridMisaligned: ``law`` is on another grid or a lump sum is off the
            grid.
    """
    require_grid(law=law, grid=grid, spec=spec)
    tables = intensity_tables(spec=spec, law=law)
    values = solve_retired_characteristics(
        spec=spec,
        grid=grid,
        hazard=tables.mortality_given_retirement[:, ::2],
        dead=dead_stage_table(spec=spec, grid=grid),
    )
    LOGGER.debug("Solved %d retired characteristics.", grid.size + 1)
    return CurveR(
        grid=grid,
        values=values,
        regime=Regime.G1,
        label=RETIRED.label,
    )


@beartype
def just_retired_table(
    spec: ModelSpec,
    grid: TimeGrid,
    values: FloatArray,
) -> StageTable:
    """
    Stage values of a reserve just after retirement, given on the nodes.

    The reserve jumps at lump sums paid in ``p`` like any retired reserve.
    """
    return stage_table_from_nodes(
        values=values,
        jumps=_retired_jumps(spec=spec, grid=grid, shape=values.shape[1:]),
    )


@beartype
def pool_drift(
    spec: ModelSpec,
    law: JointLaw,
    grid: TimeGrid,
    *,
    g1: CurveR | None,
) -> RetiredDrift:
    """
    The drift of the retired pool reserve, with the backward term towards
    ``g1`` just after retirement unless ``g1`` is ``None``.
    """
    tables = intensity_tables(spec=spec, law=law)
    if g1 is None:
        return RetiredDrift(
            spec=spec,
            hazard=tables.mortality_retired,
            dead=dead_stage_table(spec=spec, grid=grid),
        )
    return RetiredDrift(
        spec=spec,
        hazard=tables.mortality_retired,
        dead=dead_stage_table(spec=spec, grid=grid),
        just_retired=just_retired_table(
            spec=spec,
            grid=grid,
            values=g1.diagonal(),
        ),
        backward=tables.retirement_backward,
    )


def _pool_solve(
    spec: ModelSpec,
    grid: TimeGrid,
    drift: RetiredDrift,
) -> FloatArray:
    """
    Solve the reserve of the retired pool.
    """
    return integrate_backward(
        grid=grid,
        terminal=np.zeros(()),
        drift=drift,
        jumps=_retired_jumps(spec=spec, grid=grid, shape=()),
    )


@beartype
def solve_g2(
    spec: ModelSpec,
    law: JointLaw,
    grid: TimeGrid,
    *,
    g1: CurveR | None = None,
) -> Curve:
    """
    The reserve ``W2(t)`` of the retired pool.

    ``W' = r W - b_p - (b_pd + W_d - W) mu2 + (W1(t, t) - W) mu_bar``
    backward from zero at the horizon. ``g1`` is solved when not given.

    Raises:
        GridMisaligned: ``law`` or ``g1`` is on another grid, or a lump sum
            is off the grid.
    """
    require_grid(law=law, grid=grid, spec=spec)
    if g1 is None:
        g1 = solve_g1(spec=spec, law=law, grid=grid)
    if g1.grid != grid:
        msg = "The G1 reserve is on another grid."
        raise GridMisaligned(msg)
    values = _pool_solve(
        spec=spec,
        grid=grid,
        drift=pool_drift(spec=spec, law=law, grid=grid, g1=g1),
    )
    return Curve(grid=grid, values=values, regime=Regime.G2, label="p")


@beartype
@dataclass(frozen=True)
class PracticeResult:
    """
    The practitioners' retired reserve and its gaps.

    Attributes:
        curve: The reserve without the backward term.
        gap_g2: ``curve - W2``.
        gap_g1: ``curve - W1(t, t)``.
    """

    curve: Curve
    gap_g2: Curve
    gap_g1: Curve


@beartype
def solve_practice_approx(
    spec: ModelSpec,
    law: JointLaw,
    grid: TimeGrid,
    *,
    g1: CurveR | None = None,
    g2: Curve | None = None,
) -> PracticeResult:
    """
    The retired reserve ``W' = r W - b_p - (b_pd + W_d - W) mu2`` used in
    practice, with its gaps to the ``G2`` reserve and to the ``G1`` reserve
    just after retirement.

    Raises:
        GridMisaligned: ``law`` is on another grid or a lump sum is off the
            grid.
    """
    require_grid(law=law, grid=grid, spec=spec)
    if g1 is None:
        g1 = solve_g1(spec=spec, law=law, grid=grid)
    if g2 is None:
        g2 = solve_g2(spec=spec, law=law, grid=grid, g1=g1)
    values = _pool_solve(
        spec=spec,
        grid=grid,
        drift=pool_drift(spec=spec, law=law, grid=grid, g1=None),
    )
    LOGGER.debug(
        "Practice approximation gap at t=0: %.6g.",
        values[0] - g2.values[0],
    )
    return PracticeResult(
        curve=Curve(
            grid=grid,
            values=values,
            regime=Regime.PRACTICE,
            label="p",
        ),
        gap_g2=Curve(
            grid=grid,
            values=values - g2.values,
            regime=Regime.PRACTICE,
            label="p-G2",
        ),
        gap_g1=Curve(
            grid=grid,
            values=values - g1.diagonal(),
            regime=Regime.PRACTICE,
            label="p-G1",
        ),
    )


@beartype
def adjustment_term(g1: CurveR, g2: Curve, law: JointLaw) -> Curve:
    """
    ``(W1(t, t) - W2(t)) * mu_bar(t)`` on the nodes.
    """
    backward = law.on_grid(
        table=safe_ratio(
            numerator=law.eta_density,
            denominator=law.retired_tail,
        ),
    )
    return Curve(
        grid=g2.grid,
        values=(g1.diagonal() - g2.values) * backward,
        regime=Regime.G2,
        label="adjustment",
    )
