"""
A complete contract model and its validation.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from beartype import beartype
from scipy.integrate import cumulative_trapezoid

from retirement_thiele.exceptions import (
    BadDiscount,
    NegativeIntensity,
    StructuralViolation,
    UnboundedIntensity,
    UnboundedPayment,
)
from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.intensities import IntensitySpec
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.states import StateSpace

LOGGER = logging.getLogger(__name__)

DEFAULT_VALIDATION_RESOLUTION = 10_000
_BOUND_TOLERANCE = 1e-12
_KAPPA_TOLERANCE = 1e-12
_RATE_TOLERANCE = 1e-5


@beartype
@dataclass(frozen=True)
class ModelSpec:
    """
    Rates, payments and discounting of one contract.

    ``initial`` is the distribution of the state at time zero over the
    pre-retirement states. It defaults to state 1.
    """

    states: StateSpace
    intensities: IntensitySpec
    payments: PaymentSpec
    discount: DiscountCurve
    initial: tuple[float, ...] | None = None

    @property
    def sigma(self) -> int:
        """
        The number of pre-retirement states.
        """
        return self.states.sigma

    @property
    def horizon(self) -> float:
        """
        The contract horizon in years.
        """
        return self.payments.horizon

    def initial_distribution(self) -> FloatArray:
        """
        The distribution of the extended state at time zero.
        """
        distribution = np.zeros(self.states.extended_size)
        if self.initial is None:
            distribution[0] = 1.0
        else:
            distribution[: self.sigma] = self.initial
        return distribution

    def with_payments(self, payments: PaymentSpec) -> "ModelSpec":
        """
        The same model with other payments.
        """
        return ModelSpec(
            states=self.states,
            intensities=self.intensities,
            payments=payments,
            discount=self.discount,
            initial=self.initial,
        )


def _check_initial(spec: ModelSpec) -> None:
    """
    Check that the initial distribution lives on pre-retirement states.
    """
    if spec.initial is None:
        return
    initial = np.asarray(spec.initial)
    if (
        len(initial) != spec.sigma
        or np.any(initial < 0)
        or not math.isclose(float(initial.sum()), 1.0, abs_tol=1e-12)
    ):
        msg = (
            "The initial distribution must be a probability vector over the "
            f"{spec.sigma} pre-retirement states, got {spec.initial}."
        )
        raise StructuralViolation(msg)


def _check_intensities(spec: ModelSpec, *, side: int) -> None:
    """
    Sample every rate on a ``side`` by ``side`` grid of ``(t, u)`` values.
    """
    states = spec.states
    nodes = np.linspace(0.0, spec.horizon, num=side)
    t, u = np.meshgrid(nodes, nodes, indexing="ij")
    totals = {state: np.zeros_like(t) for state in states.extended_states}
    for source, target, intensity in spec.intensities.pairs():
        values = intensity(t=t, u=u)
        if np.any(values < 0):
            msg = (
                f"The rate from {source.label} to {target.label} is negative."
            )
            raise NegativeIntensity(msg)
        if states.is_forbidden(source=source, target=target) and np.any(
            values > 0,
        ):
            msg = (
                f"The transition from {source.label} to {target.label} is "
                "not allowed but has a positive rate."
            )
            raise StructuralViolation(msg)
        totals[source] += values
    bound = spec.intensities.sup_bound * (1 + _BOUND_TOLERANCE)
    for source, total in totals.items():
        largest = float(np.max(total))
        if not math.isfinite(largest) or largest > bound:
            msg = (
                f"The total rate out of {source.label} reaches {largest}, "
                f"above the bound {spec.intensities.sup_bound}."
            )
            raise UnboundedIntensity(msg)


def _check_discount(spec: ModelSpec, *, samples: int) -> None:
    """
    Check that the bank account starts at one, stays positive and grows at
    the short rate.
    """
    kappa_zero = float(spec.discount.kappa(t=0.0))
    if not math.isclose(kappa_zero, 1.0, abs_tol=_KAPPA_TOLERANCE):
        msg = f"The bank account must start at 1, got {kappa_zero}."
        raise BadDiscount(msg)
    times = np.linspace(0.0, spec.horizon, num=samples)
    kappa = spec.discount.kappa(t=times)
    if not np.all(np.isfinite(kappa)) or np.any(kappa <= 0):
        msg = "The bank account must be finite and positive on the horizon."
        raise BadDiscount(msg)
    accrued = cumulative_trapezoid(
        y=spec.discount.rate(t=times),
        x=times,
        initial=0.0,
    )
    gap = float(np.max(np.abs(np.log(kappa) - accrued)))
    if not gap <= _RATE_TOLERANCE * (1 + float(np.max(np.abs(accrued)))):
        msg = (
            "The short rate must be the growth rate of the bank account, "
            f"but its integral is {gap} away from the log bank account."
        )
        raise BadDiscount(msg)


def _check_payments(spec: ModelSpec, *, samples: int) -> None:
    """
    Check that every payment is finite on the horizon.
    """
    payments = spec.payments
    times = np.linspace(0.0, spec.horizon, num=samples)
    for state in payments.sojourn:
        rates = payments.sojourn_rate(state=state, t=times)
        if not np.all(np.isfinite(rates)):
            msg = f"The payment rate in {state.label} is not finite."
            raise UnboundedPayment(msg)
    for source, target in payments.transition:
        amounts = payments.transition_amount(
            source=source,
            target=target,
            t=times,
        )
        if not np.all(np.isfinite(amounts)):
            msg = (
                f"The payment on a jump from {source.label} to "
                f"{target.label} is not finite."
            )
            raise UnboundedPayment(msg)
    for payment in payments.discrete:
        if not math.isfinite(payment.amount):
            msg = (
                f"The lump sum at {payment.time} in {payment.state.label} is "
                "not finite."
            )
            raise UnboundedPayment(msg)


@beartype
def validate_model(
    spec: ModelSpec,
    *,
    resolution: int = DEFAULT_VALIDATION_RESOLUTION,
) -> ModelSpec:
    """
    Check a model and return it unchanged.

    Rates are sampled at ``resolution`` points of ``[0, n] x [0, n]`` per
    pair.

    Raises:
        StructuralViolation: A forbidden transition has a positive rate, or
            the initial distribution is invalid.
        NegativeIntensity: A sampled rate is negative.
        UnboundedIntensity: A sampled total rate exceeds the bound.
        BadDiscount: The bank account does not start at one, is not
            positive or does not grow at the short rate.
        UnboundedPayment: A sampled payment is not finite.
    """
    side = max(math.isqrt(resolution), 2)
    _check_initial(spec=spec)
    _check_intensities(spec=spec, side=side)
    _check_discount(spec=spec, samples=resolution)
    _check_payments(spec=spec, samples=resolution)
    LOGGER.debug(
        "Validated a model with sigma=%d on a %dx%d sample grid.",
        spec.sigma,
        side,
        side,
    )
    return spec
