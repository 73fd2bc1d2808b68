"""
Transition probabilities of the retired sub-chain given the retirement time.

Conditionally on retirement at ``r``, the retired health states form a
time-inhomogeneous Markov chain whose rates may depend on ``t - r``. The
forward equations are solved for every start node at once by stepping in the
time since retirement.
"""

import logging
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.generator import retired_block_rates
from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec

LOGGER = logging.getLogger(__name__)


@beartype
@dataclass(frozen=True)
class RetiredKernel:
    """
    ``transition[i, j, m, k]`` is the probability of retired health ``k`` at
    node ``i`` given health ``m`` at retirement node ``j``.
    ``death_rates[i, j, m]`` is the rate from retired health ``m`` to ``d``
    at node ``i`` after retirement at node ``j``. Both are zero for
    ``i < j``.
    """

    grid: TimeGrid
    transition: FloatArray
    death_rates: FloatArray


def _sub_generator(
    spec: ModelSpec,
    t: FloatArray,
    duration: float,
) -> FloatArray:
    """
    The generator of the retired block with deaths as a loss of mass.
    """
    moves, deaths = retired_block_rates(spec=spec, t=t, duration=duration)
    outflow = moves.sum(axis=2) + deaths
    diagonal = np.einsum("km,mn->kmn", outflow, np.eye(spec.sigma))
    return moves - diagonal


@beartype
def solve_retired_kernel(spec: ModelSpec, grid: TimeGrid) -> RetiredKernel:
    """
    Solve the forward equations of the retired sub-chain by classic
    Runge-Kutta steps of size ``grid.step`` for every retirement node.
    """
    sigma = spec.sigma
    nodes = grid.nodes
    count = grid.size + 1
    step = grid.step
    transition = np.zeros((count, count, sigma, sigma))
    death_rates = np.zeros((count, count, sigma))
    current = np.broadcast_to(np.eye(sigma), (count, sigma, sigma)).copy()
    for lag in range(count):
        active = count - lag
        starts = np.arange(active)
        duration = lag * step
        transition[starts + lag, starts] = current[:active]
        _, deaths = retired_block_rates(
            spec=spec,
            t=nodes[starts] + duration,
            duration=duration,
        )
        death_rates[starts + lag, starts] = deaths
        if active == 1:
            break
        moving = current[: active - 1]
        times = nodes[: active - 1] + duration
        half = step / 2
        k1 = moving @ _sub_generator(spec=spec, t=times, duration=duration)
        middle = _sub_generator(
            spec=spec,
            t=times + half,
            duration=duration + half,
        )
        k2 = (moving + half * k1) @ middle
        k3 = (moving + half * k2) @ middle
        k4 = (moving + step * k3) @ _sub_generator(
            spec=spec,
            t=times + step,
            duration=duration + step,
        )
        current = moving + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    LOGGER.debug(
        "Solved the retired sub-chain for %d retirement nodes.",
        count,
    )
    return RetiredKernel(
        grid=grid,
        transition=transition,
        death_rates=death_rates,
    )
