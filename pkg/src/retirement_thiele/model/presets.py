"""
Ready-made models.
"""

from typing import Literal

from beartype import beartype

from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import (
    Constant,
    GompertzMakeham,
    PiecewiseLinear,
    TimeFunction,
)
from retirement_thiele.model.intensities import (
    Intensity,
    scanned_intensity_spec,
)
from retirement_thiele.model.payments import DiscretePayment, PaymentSpec
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import (
    DEAD,
    RETIRED,
    StateId,
    StateSpace,
    pre_retirement,
    retired_observed,
)


def _model(
    *,
    states: StateSpace,
    rates: dict[tuple[StateId, StateId], Intensity],
    payments: PaymentSpec,
    interest: float,
) -> ModelSpec:
    """
    A model whose bound comes from a grid scan.
    """
    return ModelSpec(
        states=states,
        intensities=scanned_intensity_spec(
            states=states,
            rates=rates,
            horizon=payments.horizon,
        ),
        payments=payments,
        discount=DiscountCurve.constant_rate(rate=interest),
    )


@beartype
def term_insurance_model(
    *,
    mortality: float,
    interest: float,
    horizon: float,
    benefit: float = 1.0,
) -> ModelSpec:
    """
    A single life with constant mortality and a death benefit.

    There is one pre-retirement state and nobody retires.
    """
    states = StateSpace(sigma=1)
    active = pre_retirement(index=1)
    return _model(
        states=states,
        rates={(active, DEAD): Intensity(function=Constant(value=mortality))},
        payments=PaymentSpec(
            horizon=horizon,
            transition={(active, DEAD): Constant(value=benefit)},
        ),
        interest=interest,
    )


@beartype
def disability_retirement_model(
    *,
    horizon: float = 40.0,
    age: float = 40.0,
    hazards: Literal["constant", "gompertz"] = "gompertz",
    retired_mortality: Literal["health", "uniform", "duration"] = "health",
    interest: float = 0.03,
    lump_sum: bool = True,
) -> ModelSpec:
    """
    An active-disabled model with retirement.

    States are ``1`` active, ``2`` disabled, ``3`` retired from active,
    ``4`` retired from disabled and ``d`` dead. Retirement keeps the health
    state and retired actives may become disabled.

    ``retired_mortality`` selects the mortality after retirement:

    * ``health``: the mortality of the health state before retirement.
    * ``uniform``: one rate for all retirees, free of the retirement time.
    * ``duration``: ``0.01 + 0.002 * (t - r)`` with ``r`` the retirement
      time.

    Payments are a premium of 1 per year while active, a disability annuity
    of 1, a pension of 1, a death benefit of 5 before and 2 after
    retirement, and optionally a lump sum of 10 paid at ``horizon / 2`` to
    actives.
    """
    states = StateSpace(sigma=2)
    active, disabled = pre_retirement(index=1), pre_retirement(index=2)
    retired_active, retired_disabled = (
        retired_observed(index=3),
        retired_observed(index=4),
    )
    mortality: dict[StateId, TimeFunction]
    if hazards == "gompertz":
        active_mortality = GompertzMakeham(
            a=0.0005,
            b=7.586e-5,
            c=0.087498,
            age=age,
        )
        mortality = {
            active: active_mortality,
            disabled: GompertzMakeham(
                a=0.0105,
                b=active_mortality.b,
                c=active_mortality.c,
                age=age,
            ),
        }
        disability: TimeFunction = GompertzMakeham(
            a=0.0004,
            b=3.467e-6,
            c=0.138155,
            age=age,
        )
        retirement: TimeFunction = PiecewiseLinear(
            knots=(0.0, horizon / 2, horizon * 5 / 8, horizon),
            values=(0.02, 0.05, 0.3, 0.3),
        )
    else:
        mortality = {
            active: Constant(value=0.005),
            disabled: Constant(value=0.02),
        }
        disability = Constant(value=0.02)
        retirement = Constant(value=0.05)

    rates = {
        (active, disabled): Intensity(function=disability),
        (disabled, active): Intensity(function=Constant(value=0.05)),
        (active, DEAD): Intensity(function=mortality[active]),
        (disabled, DEAD): Intensity(function=mortality[disabled]),
        (active, retired_active): Intensity(function=retirement),
        (disabled, retired_disabled): Intensity(function=retirement),
    }
    if retired_mortality == "health":
        rates[(retired_active, retired_disabled)] = Intensity(
            function=Constant(value=0.01),
        )
        rates[(retired_active, DEAD)] = Intensity(function=mortality[active])
        rates[(retired_disabled, DEAD)] = Intensity(
            function=mortality[disabled],
        )
    elif retired_mortality == "uniform":
        for retired in (retired_active, retired_disabled):
            rates[(retired, DEAD)] = Intensity(function=mortality[active])
    else:
        by_duration = PiecewiseLinear(knots=(0.0, 1.0), values=(0.01, 0.012))
        for retired in (retired_active, retired_disabled):
            rates[(retired, DEAD)] = Intensity(
                function=by_duration,
                duration_dependent=True,
            )

    payments = PaymentSpec(
        horizon=horizon,
        sojourn={
            active: Constant(value=-1.0),
            disabled: Constant(value=1.0),
            RETIRED: Constant(value=1.0),
        },
        transition={
            (active, DEAD): Constant(value=5.0),
            (disabled, DEAD): Constant(value=5.0),
            (RETIRED, DEAD): Constant(value=2.0),
        },
        discrete=(
            (DiscretePayment(time=horizon / 2, state=active, amount=10.0),)
            if lump_sum
            else ()
        ),
    )
    return _model(
        states=states,
        rates=rates,
        payments=payments,
        interest=interest,
    )
