"""
Discounted future payments along sampled paths.

``Y(t)`` is the value at ``t`` of every payment strictly after ``t``: sojourn
payments, lump sums and payments on jumps, each discounted with
``kappa(t) / kappa(s)``.
"""

import math
from dataclasses import dataclass

import numpy as np
from beartype import beartype
from scipy.integrate import cumulative_trapezoid

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.mc_oracle.paths import (
    PathSample,
    PathSet,
    check_time,
    path_set_of,
)
from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.states import StateId

DEFAULT_QUADRATURE_STEP = 0.01
_PART_TOLERANCE = 1e-9


@beartype
@dataclass(frozen=True)
class PaymentIntegrals:
    """
    ``cumulative[j][m] = integral of b_j(s) / kappa(s)`` from zero to
    ``nodes[m]``, by the trapezoidal rule.
    """

    payments: PaymentSpec
    discount: DiscountCurve
    nodes: FloatArray
    cumulative: dict[StateId, FloatArray]

    def between(
        self,
        state: StateId,
        start: FloatArray,
        end: FloatArray,
    ) -> FloatArray:
        """
        The integral of ``b_j / kappa`` over ``[start, end]``.
        """
        table = self.cumulative[state]
        return np.asarray(
            np.interp(end, self.nodes, table)
            - np.interp(start, self.nodes, table),
            dtype=np.float64,
        )


@beartype
def payment_integrals(
    payments: PaymentSpec,
    discount: DiscountCurve,
    *,
    step: float = DEFAULT_QUADRATURE_STEP,
    grid: TimeGrid | None = None,
) -> PaymentIntegrals:
    """
    Tabulate the discounted sojourn payments on nodes about ``step`` apart.

    With a ``grid`` every grid node is a quadrature node: each grid step is
    split into equal parts no longer than ``step``.

    Raises:
        GridMisaligned: ``grid`` does not end at the horizon.
    """
    if grid is None:
        count = max(1, round(payments.horizon / step))
    else:
        if not math.isclose(grid.horizon, payments.horizon):
            msg = (
                f"The grid ends at {grid.horizon}, the contract at "
                f"{payments.horizon}."
            )
            raise GridMisaligned(msg)
        parts = max(1, math.ceil(grid.step / step - _PART_TOLERANCE))
        count = grid.size * parts
    nodes = np.linspace(0.0, payments.horizon, num=count + 1)
    v = discount.v(t=nodes)
    cumulative = {
        state: cumulative_trapezoid(
            y=payments.sojourn_rate(state=state, t=nodes) * v,
            x=nodes,
            initial=0.0,
        )
        for state in payments.sojourn
    }
    return PaymentIntegrals(
        payments=payments,
        discount=discount,
        nodes=nodes,
        cumulative=cumulative,
    )


@beartype
def discounted_outflows(
    paths: PathSet,
    integrals: PaymentIntegrals,
    t: float,
) -> FloatArray:
    """
    ``Y(t)`` for every path.

    Raises:
        OutOfHorizon: ``t`` is not in ``[0, n]``.
    """
    check_time(t=t, horizon=paths.horizon)
    states = paths.states
    payments = integrals.payments
    kappa_t = float(integrals.discount.kappa(t=t))
    outflow = np.zeros(paths.n_paths)
    path, start, end, state = paths.sojourns
    lumped = paths.lumped(positions=state)
    for sojourn_state in integrals.cumulative:
        chosen = lumped == states.lumped_position(state=sojourn_state)
        values = integrals.between(
            state=sojourn_state,
            start=np.clip(start[chosen], t, paths.horizon),
            end=np.clip(end[chosen], t, paths.horizon),
        )
        outflow += kappa_t * np.bincount(
            path[chosen],
            weights=values,
            minlength=paths.n_paths,
        )
    for payment in payments.discrete:
        if payment.time <= t:
            continue
        before = paths.lumped(positions=paths.state_before(t=payment.time))
        paid = before == states.lumped_position(state=payment.state)
        value = payment.amount * kappa_t / float(
            integrals.discount.kappa(t=payment.time),
        )
        outflow[paid] += value
    later = paths.jump_time > t
    source = paths.lumped(positions=paths.jump_source)
    target = paths.lumped(positions=paths.jump_state)
    for pair_source, pair_target in payments.transition:
        chosen = (
            later
            & (source == states.lumped_position(state=pair_source))
            & (target == states.lumped_position(state=pair_target))
        )
        times = paths.jump_time[chosen]
        values = payments.transition_amount(
            source=pair_source,
            target=pair_target,
            t=times,
        )
        outflow += np.bincount(
            paths.jump_path[chosen],
            weights=values * kappa_t / integrals.discount.kappa(t=times),
            minlength=paths.n_paths,
        )
    return outflow


@beartype
def discounted_outflow(
    path: PathSample,
    payments: PaymentSpec,
    discount: DiscountCurve,
    t: float,
    *,
    step: float = DEFAULT_QUADRATURE_STEP,
) -> float:
    """
    ``Y(t)`` for one path.

    Raises:
        OutOfHorizon: ``t`` is not in ``[0, n]``.
    """
    outflows = discounted_outflows(
        paths=path_set_of(samples=[path]),
        integrals=payment_integrals(
            payments=payments,
            discount=discount,
            step=step,
        ),
        t=t,
    )
    return float(outflows[0])
