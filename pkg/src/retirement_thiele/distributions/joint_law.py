"""
The joint law of the retirement time and the time of death.

All tables live on the stage lattice, the analysis grid refined to half its
step, so that Runge-Kutta stages of the reserve solvers read tabulated values.
Index ``i`` is the node of ``t`` and ``j`` the node of the retirement time
``r``; entries with ``j > i`` are zero.
"""

import logging
from dataclasses import dataclass

import numpy as np
from beartype import beartype
from scipy.integrate import trapezoid

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.kernel import (
    RetiredKernel,
    solve_retired_kernel,
)
from retirement_thiele.distributions.occupation import (
    OccupationTable,
    entry_flow,
    solve_occupation,
)
from retirement_thiele.distributions.quadrature import triangle_trapezoid
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec

LOGGER = logging.getLogger(__name__)

DENOMINATOR_THRESHOLD = 1e-12


@beartype
def safe_ratio(
    numerator: FloatArray,
    denominator: FloatArray,
) -> FloatArray:
    """
    ``numerator / denominator``, zero where the denominator is at most
    ``DENOMINATOR_THRESHOLD``.
    """
    usable = denominator > DENOMINATOR_THRESHOLD
    return np.divide(
        numerator,
        denominator,
        out=np.zeros(np.broadcast(numerator, denominator).shape),
        where=usable,
    )


@beartype
@dataclass(frozen=True)
class JointLaw:
    """
    Densities of retirement and of death after retirement.

    Attributes:
        grid: The analysis grid.
        stage_grid: The grid every table is sampled on.
        occupation: Occupation probabilities on ``stage_grid``.
        entry: ``entry[j, k, m]``, the density of retiring at ``r_j`` from
            pre-retirement state ``k`` into retired health ``m``.
        eta_density: The density of the retirement time.
        survival: ``P(delta > t_i | eta = r_j)``.
        death_density: The density of ``delta`` at ``t_i`` given
            ``eta = r_j``.
        survival_given_state: ``P(delta > t_i | eta = r_j, H = k)``.
        death_density_given_state: The density of ``delta`` at ``t_i`` given
            ``eta = r_j, H = k``.
        retired_tail: ``P(eta <= t < delta)``.
        death_flow: The integral over ``r`` of the joint density of
            ``(eta, delta)`` at ``(r, t)``.
    """

    grid: TimeGrid
    stage_grid: TimeGrid
    occupation: OccupationTable
    entry: FloatArray
    eta_density: FloatArray
    survival: FloatArray
    death_density: FloatArray
    survival_given_state: FloatArray
    death_density_given_state: FloatArray
    retired_tail: FloatArray
    death_flow: FloatArray

    def joint_density(self) -> FloatArray:
        """
        The joint density of ``(eta, delta)`` at ``(r_j, t_i)``.
        """
        return self.eta_density[None, :] * self.death_density

    def retirement_probability(self) -> float:
        """
        ``P(eta <= n)``.
        """
        return float(trapezoid(self.eta_density, dx=self.stage_grid.step))

    def on_grid(self, table: FloatArray) -> FloatArray:
        """
        Restrict a table indexed by stage nodes on its leading axis to the
        analysis grid.
        """
        return table[::2]


def _mix_given_state(spec: ModelSpec, t: FloatArray) -> FloatArray:
    """
    ``mix[j, k, m]``: the probability of retired health ``m`` for someone
    retiring at ``r_j`` from pre-retirement state ``k``.
    """
    rates = entry_flow(
        spec=spec,
        pre_occupation=np.ones((len(t), spec.sigma)),
        t=t,
    )
    return safe_ratio(
        numerator=rates,
        denominator=rates.sum(axis=2, keepdims=True),
    )


def _conditional(
    mix: FloatArray,
    kernel: RetiredKernel,
) -> tuple[FloatArray, FloatArray]:
    """
    Survival and death density given a mix over retired health at entry.

    ``mix`` has shape ``(count, sigma)`` indexed by the retirement node.
    """
    health = np.einsum("jm,ijmn->ijn", mix, kernel.transition)
    survival = health.sum(axis=2)
    death = (health * kernel.death_rates).sum(axis=2)
    return survival, death


@beartype
def history_conditioned(
    spec: ModelSpec,
    kernel: RetiredKernel,
) -> tuple[FloatArray, FloatArray]:
    """
    Survival and death density after retirement given the retirement node
    and the pre-retirement state.

    Both tables are indexed ``[i, j, k]`` by the node of ``t``, the
    retirement node and the zero-based pre-retirement state, on the grid of
    ``kernel``.
    """
    by_state = _mix_given_state(spec=spec, t=kernel.grid.nodes)
    conditional = [
        _conditional(mix=by_state[:, k, :], kernel=kernel)
        for k in range(spec.sigma)
    ]
    survival = np.stack([s for s, _ in conditional], axis=2)
    death = np.stack([d for _, d in conditional], axis=2)
    return survival, death


@beartype
def joint_law(spec: ModelSpec, grid: TimeGrid) -> JointLaw:
    """
    Tabulate the joint law of retirement and death on the stage lattice of
    ``grid``.

    Raises:
        NonMarkovPreRetirement: A pre-retirement rate depends on the
            duration.
    """
    stage_grid = grid.refined()
    nodes = stage_grid.nodes
    kernel = solve_retired_kernel(spec=spec, grid=stage_grid)
    occupation = solve_occupation(spec=spec, grid=stage_grid, kernel=kernel)
    entry = entry_flow(
        spec=spec,
        pre_occupation=occupation.extended[:, : spec.sigma],
        t=nodes,
    )
    eta_density = entry.sum(axis=(1, 2))
    mix = safe_ratio(
        numerator=entry.sum(axis=1),
        denominator=eta_density[:, None],
    )
    survival, death_density = _conditional(mix=mix, kernel=kernel)

    survival_given_state, death_density_given_state = history_conditioned(
        spec=spec,
        kernel=kernel,
    )

    weighted_survival = eta_density[None, :] * survival
    retired_tail = triangle_trapezoid(
        values=weighted_survival,
        step=stage_grid.step,
    )
    death_flow = triangle_trapezoid(
        values=eta_density[None, :] * death_density,
        step=stage_grid.step,
    )
    LOGGER.debug(
        "Tabulated the joint law on %d stage nodes, P(eta <= n) = %.6g.",
        len(nodes),
        float(trapezoid(eta_density, dx=stage_grid.step)),
    )
    return JointLaw(
        grid=grid,
        stage_grid=stage_grid,
        occupation=occupation,
        entry=entry,
        eta_density=eta_density,
        survival=survival,
        death_density=death_density,
        survival_given_state=survival_given_state,
        death_density_given_state=death_density_given_state,
        retired_tail=retired_tail,
        death_flow=death_flow,
    )
