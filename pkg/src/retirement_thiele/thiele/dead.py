"""
The reserve of the dead state and lump sums as jump conditions.
"""

import logging
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import DEAD, StateId
from retirement_thiele.thiele.rk4 import Stage, StageTable, integrate_backward
from retirement_thiele.thiele.surfaces import Curve, Regime

LOGGER = logging.getLogger(__name__)


@beartype
def lump_sum_jumps(
    payments: PaymentSpec,
    grid: TimeGrid,
    state: StateId,
) -> dict[int, float]:
    """
    The lump sums paid in ``state`` keyed by the node they fall on.

    Raises:
        GridMisaligned: A lump sum is not paid at a node.
    """
    return {
        grid.index_of(t=payment.time): payment.amount
        for payment in payments.lump_sums_in(state=state)
    }


@beartype
@dataclass(frozen=True)
class DeadDrift:
    """
    ``W' = r W - b_d``.
    """

    spec: ModelSpec

    def __call__(self, stage: Stage, values: FloatArray) -> FloatArray:
        """
        The drift at ``stage``.
        """
        rate = self.spec.discount.rate(t=stage.time)
        payment = self.spec.payments.sojourn_rate(state=DEAD, t=stage.time)
        return rate * values - payment


@beartype
def dead_stage_table(spec: ModelSpec, grid: TimeGrid) -> StageTable:
    """
    The dead reserve on the nodes of ``grid.refined()``.

    Raises:
        GridMisaligned: A lump sum in ``d`` is not paid at a node of
            ``grid``.
    """
    for payment in spec.payments.lump_sums_in(state=DEAD):
        grid.index_of(t=payment.time)
    stage_grid = grid.refined()
    jumps = lump_sum_jumps(
        payments=spec.payments,
        grid=stage_grid,
        state=DEAD,
    )
    right = integrate_backward(
        grid=stage_grid,
        terminal=np.zeros(()),
        drift=DeadDrift(spec=spec),
        jumps={node: np.asarray(amount) for node, amount in jumps.items()},
    )
    left = right.copy()
    for node, amount in jumps.items():
        if node > 0:
            left[node] += amount
    return StageTable(right=right, left=left)


@beartype
def solve_dead_reserve(spec: ModelSpec, grid: TimeGrid) -> Curve:
    """
    The reserve of someone who has died, ``W_d``.

    Between lump sums the reserve solves ``W' = W kappa' / kappa - b_d``
    backward from zero at the horizon. At a lump sum ``b`` paid at ``t_m``
    the reserve jumps: ``W(t_m-) = W(t_m) + b``.

    Raises:
        GridMisaligned: A lump sum in ``d`` is not paid at a node.
    """
    table = dead_stage_table(spec=spec, grid=grid)
    LOGGER.debug("Solved the dead reserve on %d nodes.", grid.size + 1)
    return Curve(
        grid=grid,
        values=table.right[::2].copy(),
        regime=Regime.FULL,
        label=DEAD.label,
    )
