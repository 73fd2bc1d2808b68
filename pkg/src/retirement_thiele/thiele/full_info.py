"""
Reserves under full information.

Before retirement the insurer observes the health state ``j`` and the time
``s`` it was entered, so the reserve is ``W0_j(t, s)``. After retirement it
observes the retirement time ``r`` and the state ``k`` retired from, and the
reserve is ``W0_p(t, s, r, k)``; it does not depend on ``s`` because
retirement rates are Markov. The dead reserve is shared by every regime.

Pre-retirement characteristics couple to the reserve just after entering
another state, the diagonal ``W0_k(t, t)``. When pre-retirement rates are
Markov the characteristic entered at ``t_i`` carries that diagonal through the
step ending at ``t_i``. Otherwise the diagonal at interior stages is
extrapolated from later nodes.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.joint_law import (
    JointLaw,
    history_conditioned,
    safe_ratio,
)
from retirement_thiele.distributions.kernel import solve_retired_kernel
from retirement_thiele.exceptions import (
    DiagonalInterpolationWarning,
    NonMarkovPreRetirement,
)
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import RETIRED, StateKind, lump_state
from retirement_thiele.thiele.dead import (
    dead_stage_table,
    lump_sum_jumps,
    solve_dead_reserve,
)
from retirement_thiele.thiele.retired import (
    just_retired_table,
    require_grid,
    solve_retired_characteristics,
)
from retirement_thiele.thiele.rk4 import Stage, StageTable, integrate_backward
from retirement_thiele.thiele.surfaces import (
    Curve,
    CurveS,
    Regime,
    Surface4,
)

LOGGER = logging.getLogger(__name__)

CONSTANCY_TOLERANCE = 1e-8

# Lagrange weights from the nodes ``i + 1, i + 2, i + 3`` to the midpoint of
# step ``i`` and to node ``i``.
_QUADRATIC_TO_MIDPOINT = np.array([1.875, -1.25, 0.375])
_QUADRATIC_TO_NODE = np.array([3.0, -3.0, 1.0])
_LINEAR_TO_MIDPOINT = np.array([1.5, -0.5])
_LINEAR_TO_NODE = np.array([2.0, -1.0])
_EXTRAPOLATION = {
    2: (_LINEAR_TO_MIDPOINT, _LINEAR_TO_NODE),
    3: (_QUADRATIC_TO_MIDPOINT, _QUADRATIC_TO_NODE),
}


@beartype
@dataclass(frozen=True)
class FullInfoReserves:
    """
    Reserves under full information.

    Attributes:
        pre: ``W0_j(t, s)`` for every pre-retirement state, in state order.
        retired: ``W0_p(t, s, r, k)``.
        dead: ``W_d(t)``.
    """

    pre: tuple[CurveS, ...]
    retired: Surface4
    dead: Curve

    def just_retired(self, k: int) -> FloatArray:
        """
        The reserve at ``t_i`` just after retiring from the one-based state
        ``k`` at ``t_i``.
        """
        return self.retired.just_retired(k=k)


def _check_entry_rates(spec: ModelSpec) -> bool:
    """
    Check that retirement rates are Markov and return whether every other
    pre-retirement rate is.

    Raises:
        NonMarkovPreRetirement: A retirement rate depends on the duration.
    """
    markov = True
    for source, target, intensity in spec.intensities.pairs():
        if source.kind is not StateKind.PRE_RETIREMENT:
            continue
        if not intensity.duration_dependent:
            continue
        if target.is_retired:
            msg = (
                f"The retirement rate from {source.label} to {target.label} "
                "depends on the duration."
            )
            raise NonMarkovPreRetirement(msg)
        markov = False
    return markov


@beartype
def retired_hazard(
    spec: ModelSpec,
    law: JointLaw | None,
    grid: TimeGrid,
) -> FloatArray:
    """
    ``hazard[S, j, k]``: the death rate at stage node ``S`` after retiring
    at node ``j`` from state ``k``.
    """
    if law is None:
        kernel = solve_retired_kernel(spec=spec, grid=grid.refined())
        survival, death = history_conditioned(spec=spec, kernel=kernel)
    else:
        survival = law.survival_given_state
        death = law.death_density_given_state
    hazard = safe_ratio(numerator=death, denominator=survival)
    return hazard[:, ::2, :]


@runtime_checkable
class DiagonalSource(Protocol):
    """
    The reserve just after entering each pre-retirement state.
    """

    def at(self, stage: Stage, characteristics: FloatArray) -> FloatArray:
        """
        The value for every pre-retirement state at ``stage``.
        """


@beartype
@dataclass(frozen=True)
class NodeDiagonal:
    """
    A diagonal known at the nodes, read at even stage nodes only.
    """

    values: FloatArray

    def at(self, stage: Stage, characteristics: FloatArray) -> FloatArray:
        """
        The value at the node of ``stage``.
        """
        del characteristics
        return self.values[stage.index // 2]


@beartype
@dataclass(frozen=True)
class PreRetirementDrift:
    """
    ``W_j' = r W_j - b_j - sum_k (b_jk + W_k - W_j) mu_jk`` for the
    characteristics ``W_j(t, s)``.

    ``W_k`` is the reserve just after entering ``k``: read from
    ``diagonal`` for pre-retirement states, from ``just_retired`` for ``p``
    and from ``dead`` for ``d``. Rates out of ``j`` are evaluated at the
    duration ``t - s``.
    """

    spec: ModelSpec
    entry_times: FloatArray
    diagonal: DiagonalSource
    just_retired: StageTable
    dead: StageTable

    def __call__(self, stage: Stage, values: FloatArray) -> FloatArray:
        """
        The drift of every characteristic at ``stage``.
        """
        sigma = self.spec.sigma
        t = stage.time
        rates = self.rates(t=t)
        sojourn, transition = self.payments(t=t)
        targets = np.zeros((sigma, self.spec.states.lumped_size))
        targets[:, :sigma] = self.diagonal.at(
            stage=stage,
            characteristics=values,
        )[None, :]
        targets[:, sigma] = self.just_retired.at(stage=stage)
        targets[:, sigma + 1] = self.dead.at(stage=stage)
        at_risk = (transition + targets)[:, :, None] * rates
        rate = float(self.spec.discount.rate(t=t))
        return (
            rate * values
            - sojourn[:, None]
            - at_risk.sum(axis=1)
            + values * rates.sum(axis=1)
        )

    def rates(self, t: float) -> FloatArray:
        """
        ``rates[j, k, c]``: the rate at ``t`` from pre-retirement state
        ``j`` to lumped position ``k`` on the characteristic entered at
        node ``c``.
        """
        states = self.spec.states
        durations = np.maximum(t - self.entry_times, 0.0)
        rates = np.zeros(
            (self.spec.sigma, states.lumped_size, len(self.entry_times)),
        )
        for source, target, intensity in self.spec.intensities.pairs():
            if source.kind is not StateKind.PRE_RETIREMENT:
                continue
            row = states.lumped_position(state=source)
            column = states.lumped_position(state=lump_state(state=target))
            rates[row, column] += intensity(t=t, u=durations)
        return rates

    def payments(self, t: float) -> tuple[FloatArray, FloatArray]:
        """
        Sojourn rates of the pre-retirement states and payments on their
        transitions to every lumped position at ``t``.
        """
        states = self.spec.states
        payments = self.spec.payments
        pre = states.lumped_states[: self.spec.sigma]
        sojourn = np.array(
            [float(payments.sojourn_rate(state=state, t=t)) for state in pre],
        )
        transition = np.array(
            [
                [
                    float(
                        payments.transition_amount(
                            source=source,
                            target=target,
                            t=t,
                        ),
                    )
                    for target in states.lumped_states
                ]
                for source in pre
            ],
        )
        return sojourn, transition


class _Diagonal:
    """
    The reserve just after entering each pre-retirement state, as it is
    recorded during a backward solve of the triangle.
    """

    def __init__(
        self,
        *,
        sigma: int,
        size: int,
        jumps: dict[int, FloatArray],
        markov: bool,
    ) -> None:
        """
        Start with no recorded nodes.
        """
        self.values = np.zeros((size + 1, sigma))
        self._jumps = jumps
        self._markov = markov
        self._size = size
        self.warned = False

    def record(self, node: int, characteristics: FloatArray) -> None:
        """
        Record the diagonal at ``node`` from the node values.
        """
        self.values[node] = characteristics[:, node]

    def _left(self, node: int) -> FloatArray:
        """
        The left limit at a recorded node.
        """
        return self.values[node] + self._jumps.get(node, 0.0)

    def at(self, stage: Stage, characteristics: FloatArray) -> FloatArray:
        """
        The diagonal at a stage of the step from node ``i + 1`` to ``i``.
        """
        step = stage.index // 2 - 1 if stage.upper else stage.index // 2
        if self._markov:
            return characteristics[:, step]
        if stage.upper:
            return self._left(node=step + 1)
        if not self.warned:
            warnings.warn(
                message=(
                    "The diagonal of the pre-retirement reserve is "
                    "extrapolated because pre-retirement rates depend on "
                    "the duration."
                ),
                category=DiagonalInterpolationWarning,
                stacklevel=2,
            )
            self.warned = True
        known = [
            self._left(node=node)
            for node in range(step + 1, min(step + 4, self._size + 1))
        ]
        if len(known) == 1:
            return known[0]
        to_midpoint, to_node = _EXTRAPOLATION[len(known)]
        weights = to_midpoint if stage.index % 2 == 1 else to_node
        return np.tensordot(weights, np.stack(known), axes=1)


def _solve_pre_retirement(
    spec: ModelSpec,
    grid: TimeGrid,
    *,
    just_retired: StageTable,
    dead: StageTable,
    markov: bool,
) -> FloatArray:
    """
    ``values[i, j, c]``: the reserve at ``t_i`` of state ``j`` entered at
    node ``c``.
    """
    sigma = spec.sigma
    states = spec.states
    pre = states.lumped_states[:sigma]
    pre_jumps: dict[int, FloatArray] = {}
    for j, state in enumerate(pre):
        for node, amount in lump_sum_jumps(
            payments=spec.payments,
            grid=grid,
            state=state,
        ).items():
            pre_jumps.setdefault(node, np.zeros(sigma))[j] += amount
    diagonal = _Diagonal(
        sigma=sigma,
        size=grid.size,
        jumps=pre_jumps,
        markov=markov,
    )
    values = integrate_backward(
        grid=grid,
        terminal=np.zeros((sigma, grid.size + 1)),
        drift=PreRetirementDrift(
            spec=spec,
            entry_times=grid.nodes,
            diagonal=diagonal,
            just_retired=just_retired,
            dead=dead,
        ),
        jumps={
            node: np.broadcast_to(jump[:, None], (sigma, grid.size + 1))
            for node, jump in pre_jumps.items()
        },
        on_node=lambda node, current: diagonal.record(
            node=node,
            characteristics=current,
        ),
    )
    index = np.arange(grid.size + 1)
    before_entry = index[None, :] > index[:, None]
    values[np.broadcast_to(before_entry[:, None, :], values.shape)] = np.nan
    return values


@beartype
def solve_full_info(
    spec: ModelSpec,
    law: JointLaw | None,
    grid: TimeGrid,
) -> FullInfoReserves:
    """
    Reserves given the full history of the lumped chain.

    ``law`` supplies the death rates after retirement given the retirement
    node and the state retired from; they are computed from ``spec`` when
    ``law`` is ``None``, which allows pre-retirement rates that depend on
    the duration.

    Raises:
        NonMarkovPreRetirement: A retirement rate depends on the duration.
        GridMisaligned: ``law`` is on another grid or a lump sum is off the
            grid.
    """
    markov = _check_entry_rates(spec=spec)
    if law is None:
        grid.check_payments(payments=spec.payments)
    else:
        require_grid(law=law, grid=grid, spec=spec)
    dead_table = dead_stage_table(spec=spec, grid=grid)
    retired = solve_retired_characteristics(
        spec=spec,
        grid=grid,
        hazard=retired_hazard(spec=spec, law=law, grid=grid),
        dead=dead_table,
    )
    just_retired = just_retired_table(
        spec=spec,
        grid=grid,
        values=np.diagonal(retired, axis1=0, axis2=1).T.copy(),
    )
    pre = _solve_pre_retirement(
        spec=spec,
        grid=grid,
        just_retired=just_retired,
        dead=dead_table,
        markov=markov,
    )
    curves = tuple(
        CurveS(
            grid=grid,
            values=pre[:, j, :].copy(),
            regime=Regime.FULL,
            label=str(j + 1),
        )
        for j in range(spec.sigma)
    )
    if markov:
        spread = max(curve.spread_in_s() for curve in curves)
        if spread > CONSTANCY_TOLERANCE * max(1.0, np.nanmax(np.abs(pre))):
            LOGGER.warning(
                "Markov pre-retirement reserves vary with the entry time "
                "by %.3e.",
                spread,
            )
    LOGGER.debug(
        "Solved the full-information reserves of %d states on %d nodes.",
        spec.sigma,
        grid.size + 1,
    )
    return FullInfoReserves(
        pre=curves,
        retired=Surface4(
            grid=grid,
            values=retired[:, None, :, :],
            regime=Regime.FULL,
            label=RETIRED.label,
        ),
        dead=solve_dead_reserve(spec=spec, grid=grid),
    )

