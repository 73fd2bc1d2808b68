"""
Classic Thiele equations of the extended chain.

When every rate is Markov, the reserve given the extended state is the
solution of the coupled classic Thiele system. It serves as the reference
for the regime solvers.
"""

import logging

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.exceptions import NonMarkovPreRetirement
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import StateId, lump_state
from retirement_thiele.thiele.dead import lump_sum_jumps
from retirement_thiele.thiele.rk4 import Stage, integrate_backward
from retirement_thiele.thiele.surfaces import Curve, Regime

LOGGER = logging.getLogger(__name__)


def _payments_at(spec: ModelSpec, t: float) -> tuple[FloatArray, FloatArray]:
    """
    Sojourn rates ``b[j]`` and transition payments ``B[j, k]`` between
    extended positions at ``t``.

    Payments of the lumped chain apply to every extended state with the
    same image; moves inside the retired block pay nothing.
    """
    states = spec.states
    size = states.extended_size
    sojourn = np.zeros(size)
    transition = np.zeros((size, size))
    for position, state in enumerate(states.extended_states):
        sojourn[position] = float(
            spec.payments.sojourn_rate(state=lump_state(state=state), t=t),
        )
    for source, target, _ in spec.intensities.pairs():
        lumped_source = lump_state(state=source)
        lumped_target = lump_state(state=target)
        if lumped_source == lumped_target:
            continue
        transition[
            states.extended_position(state=source),
            states.extended_position(state=target),
        ] = float(
            spec.payments.transition_amount(
                source=lumped_source,
                target=lumped_target,
                t=t,
            ),
        )
    return sojourn, transition


@beartype
def solve_extended_markov(
    spec: ModelSpec,
    grid: TimeGrid,
) -> dict[StateId, Curve]:
    """
    The reserve ``W_j`` of every extended state ``j``.

    ``W_j' = r W_j - b_j - sum_k (b_jk + W_k - W_j) mu_jk`` backward from
    zero at the horizon, with ``W_j(t_m-) = W_j(t_m) + b_j(t_m)`` at lump
    sums.

    Raises:
        NonMarkovPreRetirement: A rate depends on the duration.
        GridMisaligned: A lump sum is not paid at a node.
    """
    for source, target, intensity in spec.intensities.pairs():
        if intensity.duration_dependent:
            msg = (
                f"The rate from {source.label} to {target.label} depends on "
                "the duration; the extended chain is not Markov."
            )
            raise NonMarkovPreRetirement(msg)
    states = spec.states
    size = states.extended_size
    positions = {
        state: states.extended_position(state=state)
        for state in states.extended_states
    }
    jumps: dict[int, FloatArray] = {}
    for state, position in positions.items():
        for node, amount in lump_sum_jumps(
            payments=spec.payments,
            grid=grid,
            state=lump_state(state=state),
        ).items():
            jumps.setdefault(node, np.zeros(size))[position] += amount

    def drift(stage: Stage, values: FloatArray) -> FloatArray:
        """
        The classic Thiele drift of every state at once.
        """
        rates = np.zeros((size, size))
        for source, target, intensity in spec.intensities.pairs():
            rates[positions[source], positions[target]] = float(
                intensity(t=stage.time, u=0.0),
            )
        sojourn, transition = _payments_at(spec=spec, t=stage.time)
        rate = float(spec.discount.rate(t=stage.time))
        return (
            rate * values
            - sojourn
            - (rates * transition).sum(axis=1)
            - rates @ values
            + rates.sum(axis=1) * values
        )

    values = integrate_backward(
        grid=grid,
        terminal=np.zeros(size),
        drift=drift,
        jumps=jumps,
    )
    LOGGER.debug(
        "Solved the extended Thiele system for %d states on %d nodes.",
        size,
        grid.size + 1,
    )
    return {
        state: Curve(
            grid=grid,
            values=values[:, position].copy(),
            regime=Regime.EXTENDED,
            label=state.label,
        )
        for state, position in positions.items()
    }
