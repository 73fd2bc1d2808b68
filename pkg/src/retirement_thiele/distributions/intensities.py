"""
Forward and backward transition intensities derived from the joint law.

Every ratio follows the convention ``0 / 0 = 0``.
"""

import logging
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.joint_law import JointLaw, safe_ratio
from retirement_thiele.distributions.occupation import OccupationTable
from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import RETIRED

LOGGER = logging.getLogger(__name__)

DEFAULT_OCCUPANCY_THRESHOLD = 0.01
_SCALE_FLOOR = 1e-12


@beartype
@dataclass(frozen=True)
class IntensityTables:
    """
    Intensities on the stage lattice of a joint law.

    Attributes:
        mortality_given_retirement: ``mu1[i, j]``, the death rate at
            ``t_i`` given retirement at ``r_j``.
        mortality_given_history: ``[i, j, k]``, the death rate at ``t_i``
            given retirement at ``r_j`` from pre-retirement state ``k``.
        mortality_retired: The death rate of the retired pool at ``t_i``.
        retirement_backward: The backward rate of having just retired, for
            someone retired at ``t_i``.
        retirement_backward_by_state: ``[i, k]``, the backward rate of
            having just retired from pre-retirement state ``k``.
        lumped_forward: ``[i, j, k]``, forward rates between lumped
            positions at ``t_i`` for pre-retirement sources.
    """

    law: JointLaw
    mortality_given_retirement: FloatArray
    mortality_given_history: FloatArray
    mortality_retired: FloatArray
    retirement_backward: FloatArray
    retirement_backward_by_state: FloatArray
    lumped_forward: FloatArray


def _lumped_forward(spec: ModelSpec, t: FloatArray) -> FloatArray:
    """
    Rates from pre-retirement states to lumped positions.
    """
    states = spec.states
    rates = np.zeros((len(t), spec.sigma, states.lumped_size))
    for source, target, intensity in spec.intensities.pairs():
        position = states.extended_position(state=source)
        if position >= spec.sigma:
            continue
        lumped = states.lump_positions[states.extended_position(state=target)]
        rates[:, position, lumped] += intensity(t=t, u=0.0)
    return rates


@beartype
def intensity_tables(spec: ModelSpec, law: JointLaw) -> IntensityTables:
    """
    Tabulate every intensity of the retirement model.
    """
    entered = law.entry.sum(axis=2)
    return IntensityTables(
        law=law,
        mortality_given_retirement=safe_ratio(
            numerator=law.death_density,
            denominator=law.survival,
        ),
        mortality_given_history=safe_ratio(
            numerator=law.death_density_given_state,
            denominator=law.survival_given_state,
        ),
        mortality_retired=safe_ratio(
            numerator=law.death_flow,
            denominator=law.retired_tail,
        ),
        retirement_backward=safe_ratio(
            numerator=law.eta_density,
            denominator=law.retired_tail,
        ),
        retirement_backward_by_state=safe_ratio(
            numerator=entered,
            denominator=law.retired_tail[:, None],
        ),
        lumped_forward=_lumped_forward(spec=spec, t=law.stage_grid.nodes),
    )


def _stage_index(law: JointLaw, t: float) -> int:
    """
    The stage node of ``t``.
    """
    return law.stage_grid.index_of(t=t)


@beartype
def mu1(law: JointLaw, t: float, r: float) -> float:
    """
    The death rate at ``t`` of someone who retired at ``r``.

    Raises:
        GridMisaligned: ``t`` or ``r`` is not a stage node, or ``r > t``.
    """
    i = _stage_index(law=law, t=t)
    j = _stage_index(law=law, t=r)
    if j > i:
        msg = f"The retirement time {r} is after {t}."
        raise GridMisaligned(msg)
    ratio = safe_ratio(
        numerator=law.death_density[i, j : j + 1],
        denominator=law.survival[i, j : j + 1],
    )
    return float(ratio[0])


@beartype
def mu2(law: JointLaw, t: float) -> float:
    """
    The death rate at ``t`` of the retired pool.
    """
    i = _stage_index(law=law, t=t)
    ratio = safe_ratio(
        numerator=law.death_flow[i : i + 1],
        denominator=law.retired_tail[i : i + 1],
    )
    return float(ratio[0])


@beartype
def mu_bar(law: JointLaw, t: float) -> float:
    """
    The backward rate at ``t`` of having just retired.
    """
    i = _stage_index(law=law, t=t)
    ratio = safe_ratio(
        numerator=law.eta_density[i : i + 1],
        denominator=law.retired_tail[i : i + 1],
    )
    return float(ratio[0])


@beartype
def backward_identity_check(
    spec: ModelSpec,
    law: JointLaw,
    occupation: OccupationTable,
    *,
    threshold: float = DEFAULT_OCCUPANCY_THRESHOLD,
) -> float:
    """
    The largest relative discrepancy of the backward retirement rates.

    For every pre-retirement state ``j`` the backward rate is compared with
    ``P(Z_t = j) / P(Z_t = p)`` times the forward rate from ``j`` to ``p``,
    and the sum of the backward rates with the rate of having just retired.
    Only nodes where ``P(Z_t = p)`` exceeds ``threshold`` count.

    Raises:
        GridMisaligned: ``occupation`` is not on the stage lattice of
            ``law``.
    """
    if occupation.grid != law.stage_grid:
        msg = "The occupation table must be on the stage lattice of the law."
        raise GridMisaligned(msg)
    tables = intensity_tables(spec=spec, law=law)
    retired = occupation.probability(state=RETIRED)
    qualifying = retired > threshold
    qualifying[0] = False
    if not np.any(qualifying):
        return 0.0
    pre = occupation.extended[:, : spec.sigma]
    to_retired = tables.lumped_forward[:, :, spec.sigma]
    expected = safe_ratio(
        numerator=pre * to_retired,
        denominator=retired[:, None],
    )
    backward = tables.retirement_backward_by_state
    scale = np.maximum(np.abs(expected), _SCALE_FLOOR)
    by_state = np.abs(backward - expected) / scale
    total = np.abs(backward.sum(axis=1) - tables.retirement_backward) / (
        np.maximum(tables.retirement_backward, _SCALE_FLOOR)
    )
    discrepancy = max(
        float(np.max(by_state[qualifying])),
        float(np.max(total[qualifying])),
    )
    LOGGER.debug("Backward identity discrepancy %.3e.", discrepancy)
    return discrepancy
