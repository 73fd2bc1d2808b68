"""
The tower property between the ``G1`` and ``G2`` retired reserves.

Averaging ``W1(t, r)`` over the retirement time of the retired pool, with
weights ``f_eta(r) S(t | r) / P(eta <= t < delta)``, gives ``W2(t)``.
"""

import numpy as np
from beartype import beartype

from retirement_thiele.distributions.joint_law import JointLaw, safe_ratio
from retirement_thiele.thiele.surfaces import Curve, CurveR, Regime


@beartype
def pool_average(g1: CurveR, law: JointLaw) -> Curve:
    """
    ``W1(t, r)`` averaged over the retirement times of the pool at ``t``.

    The average uses the trapezoidal rule on the retirement nodes; it is
    zero where nobody can be retired yet.
    """
    count = g1.grid.size + 1
    index = np.arange(count)
    inside = index[None, :] <= index[:, None]
    weights = law.eta_density[::2][None, :] * law.survival[::2, ::2]
    weights = np.where(inside, weights, 0.0)
    weights[:, 0] /= 2
    weights[index, index] /= 2
    weighted = np.where(inside, g1.values, 0.0) * weights
    average = safe_ratio(
        numerator=weighted.sum(axis=1),
        denominator=weights.sum(axis=1),
    )
    return Curve(
        grid=g1.grid,
        values=average,
        regime=Regime.G1,
        label="pool average",
    )


@beartype
def tower_gap(g1: CurveR, g2: Curve, law: JointLaw) -> Curve:
    """
    The pool average of ``W1`` minus ``W2`` at every node.
    """
    average = pool_average(g1=g1, law=law)
    retired = law.on_grid(table=law.retired_tail) > 0
    gap = np.where(retired, average.values - g2.values, 0.0)
    return Curve(grid=g2.grid, values=gap, regime=Regime.G2, label="tower")
