"""
Occupation probabilities of the extended chain.
"""

import logging
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.generator import (
    generator,
    require_markov_pre_retirement,
    retired_rates_are_markov,
    transition_rates,
)
from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.kernel import (
    RetiredKernel,
    solve_retired_kernel,
)
from retirement_thiele.distributions.quadrature import triangle_trapezoid
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import StateId, StateKind

LOGGER = logging.getLogger(__name__)

RENORMALIZATION_TOLERANCE = 1e-10


@beartype
@dataclass(frozen=True)
class OccupationTable:
    """
    ``extended[i, j]`` is the probability of extended position ``j`` at node
    ``i``.
    """

    spec: ModelSpec
    grid: TimeGrid
    extended: FloatArray

    @property
    def lumped(self) -> FloatArray:
        """
        Probabilities of the lumped positions.
        """
        states = self.spec.states
        lumped = np.zeros((self.extended.shape[0], states.lumped_size))
        np.add.at(lumped.T, states.lump_positions, self.extended.T)
        return lumped

    def probability(self, state: StateId) -> FloatArray:
        """
        The probability of a state of either chain at every node.
        """
        states = self.spec.states
        if state in states.lumped_states:
            return self.lumped[:, states.lumped_position(state=state)]
        return self.extended[:, states.extended_position(state=state)]


def _clean(row: FloatArray, *, node: int) -> FloatArray:
    """
    Renormalize a row whose sum drifted and clamp it to ``[0, 1]``.
    """
    total = row.sum()
    if abs(total - 1.0) > RENORMALIZATION_TOLERANCE:
        LOGGER.debug(
            "Renormalized occupation row %d (sum %.3e).",
            node,
            total,
        )
        row = row / total
    return np.clip(row, 0.0, 1.0)


def _forward(
    spec: ModelSpec,
    grid: TimeGrid,
    *,
    include_retired: bool,
) -> FloatArray:
    """
    Runge-Kutta steps of the forward equations ``p' = p Q(t)``.

    With ``include_retired`` false, retired states absorb and collect the
    retirement flow.
    """
    nodes = grid.nodes
    step = grid.step
    table = np.zeros((len(nodes), spec.states.extended_size))
    table[0] = spec.initial_distribution()

    def q(t: float) -> FloatArray:
        """
        The generator at ``t``.
        """
        return generator(
            rates=transition_rates(
                spec=spec,
                t=t,
                include_retired=include_retired,
            ),
        )

    for i in range(grid.size):
        t = float(nodes[i])
        row = table[i]
        middle = q(t=t + step / 2)
        k1 = row @ q(t=t)
        k2 = (row + step / 2 * k1) @ middle
        k3 = (row + step / 2 * k2) @ middle
        k4 = (row + step * k3) @ q(t=t + step)
        table[i + 1] = _clean(
            row=row + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4),
            node=i + 1,
        )
    return table


@beartype
def entry_flow(
    spec: ModelSpec,
    pre_occupation: FloatArray,
    t: FloatArray,
) -> FloatArray:
    """
    ``flow[i, k, m]``: the density of retiring at ``t[i]`` from
    pre-retirement state ``k`` into retired health ``m``.
    """
    sigma = spec.sigma
    flow = np.zeros((len(t), sigma, sigma))
    for source, target, intensity in spec.intensities.pairs():
        retires = (
            source.kind is StateKind.PRE_RETIREMENT and target.is_retired
        )
        if not retires:
            continue
        k = spec.states.extended_position(state=source)
        m = spec.states.extended_position(state=target) - sigma
        flow[:, k, m] = pre_occupation[:, k] * intensity(t=t, u=0.0)
    return flow


@beartype
def retired_by_convolution(
    flow: FloatArray,
    kernel: RetiredKernel,
) -> FloatArray:
    """
    Occupation of the retired health states from the retirement flow.

    ``result[i, m] = sum_k integral_0^t_i flow(r, k, .) P(t_i | r)`` by the
    trapezoidal rule.
    """
    mix = flow.sum(axis=1)
    weighted = np.einsum("jm,ijmn->ijn", mix, kernel.transition)
    return triangle_trapezoid(values=weighted, step=kernel.grid.step)


@beartype
def solve_occupation(
    spec: ModelSpec,
    grid: TimeGrid,
    *,
    kernel: RetiredKernel | None = None,
) -> OccupationTable:
    """
    Occupation probabilities of the extended chain on ``grid``.

    When retired rates depend on the time since retirement, the retired
    states are filled by convolving the retirement flow with the retired
    sub-chain; ``kernel`` must then be on ``grid`` and is computed if not
    given.

    Raises:
        NonMarkovPreRetirement: A pre-retirement rate depends on the
            duration.
    """
    require_markov_pre_retirement(spec=spec)
    if retired_rates_are_markov(spec=spec):
        table = _forward(spec=spec, grid=grid, include_retired=True)
    else:
        sigma = spec.sigma
        table = _forward(spec=spec, grid=grid, include_retired=False)
        if kernel is None:
            kernel = solve_retired_kernel(spec=spec, grid=grid)
        flow = entry_flow(
            spec=spec,
            pre_occupation=table[:, :sigma],
            t=grid.nodes,
        )
        table[:, sigma : 2 * sigma] = retired_by_convolution(
            flow=flow,
            kernel=kernel,
        )
        alive = table[:, : 2 * sigma].sum(axis=1)
        table[:, 2 * sigma] = np.clip(1.0 - alive, 0.0, 1.0)
    LOGGER.debug("Solved occupation probabilities on %d nodes.", grid.size + 1)
    return OccupationTable(spec=spec, grid=grid, extended=table)
