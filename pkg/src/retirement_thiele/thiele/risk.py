"""
Forward and backward sums at risk of solved reserves.
"""

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.intensities import intensity_tables
from retirement_thiele.distributions.joint_law import JointLaw
from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import (
    DEAD,
    RETIRED,
    StateKind,
    lump_state,
)
from retirement_thiele.thiele.full_info import FullInfoReserves
from retirement_thiele.thiele.retired import adjustment_term
from retirement_thiele.thiele.surfaces import Curve, CurveR, SumAtRisk


@beartype
def backward_adjustment(
    full: FullInfoReserves,
    g2: Curve,
    law: JointLaw,
    spec: ModelSpec,
) -> FloatArray:
    """
    ``adjustment[i, k]``: the backward term ``(W0_p(t, t, k) - W2(t))``
    times the backward rate of having just retired from ``k``.

    Summed over ``k`` the terms give the backward term of ``W2`` with the
    full-information reserves just after retirement.
    """
    tables = intensity_tables(spec=spec, law=law)
    backward = law.on_grid(table=tables.retirement_backward_by_state)
    just_retired = np.stack(
        [full.just_retired(k=k) for k in range(1, spec.sigma + 1)],
        axis=1,
    )
    return (just_retired - g2.values[:, None]) * backward


def _pre_forward(
    spec: ModelSpec,
    full: FullInfoReserves,
) -> dict[tuple[str, str], FloatArray]:
    """
    Forward sums at risk out of the pre-retirement states, for someone
    who entered the state at time zero.
    """
    states = spec.states
    nodes = full.dead.grid.nodes
    forward: dict[tuple[str, str], FloatArray] = {}
    for source, target, _ in spec.intensities.pairs():
        if source.kind is not StateKind.PRE_RETIREMENT:
            continue
        lumped = lump_state(state=target)
        position = states.lumped_position(state=source)
        before = full.pre[position].values[:, 0]
        if lumped == DEAD:
            after = full.dead.values
        elif lumped == RETIRED:
            after = full.just_retired(k=position + 1)
        else:
            after = full.pre[states.lumped_position(state=lumped)].diagonal()
        amount = spec.payments.transition_amount(
            source=source,
            target=lumped,
            t=nodes,
        )
        forward[source.label, lumped.label] = amount + after - before
    return forward


@beartype
def sums_at_risk(
    spec: ModelSpec,
    law: JointLaw,
    full: FullInfoReserves,
    g1: CurveR,
    g2: Curve,
) -> SumAtRisk:
    """
    Sums at risk of the full-information system and of the retired pool.

    Forward sums cover every declared transition out of a pre-retirement
    state, keyed by lumped labels, and the death of a retired person under
    the coarsest information.

    Raises:
        GridMisaligned: The reserves are not on the grid of ``law``.
    """
    grid = law.grid
    if any(
        surface.grid != grid for surface in (full.dead, g1, g2, full.retired)
    ):
        msg = "The reserves and the law are on different grids."
        raise GridMisaligned(msg)
    forward = _pre_forward(spec=spec, full=full)
    on_death = spec.payments.transition_amount(
        source=RETIRED,
        target=DEAD,
        t=grid.nodes,
    )
    forward[RETIRED.label, DEAD.label] = (
        on_death + full.dead.values - g2.values
    )
    return SumAtRisk(
        grid=grid,
        forward=forward,
        adjustment=adjustment_term(g1=g1, g2=g2, law=law).values,
        adjustment_by_state=backward_adjustment(
            full=full,
            g2=g2,
            law=law,
            spec=spec,
        ),
    )
