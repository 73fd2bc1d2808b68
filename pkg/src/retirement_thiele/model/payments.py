"""
Deterministic payments of a contract, defined on lumped states.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import pairwise
from types import MappingProxyType

import numpy as np
from beartype import beartype

from retirement_thiele.model.functions import (
    FloatArray,
    TimeFunction,
    as_float_array,
)
from retirement_thiele.model.states import StateId, StateKind


@beartype
@dataclass(frozen=True)
class DiscretePayment:
    """
    A lump sum paid at ``time`` to a policyholder who is in ``state`` just
    before ``time``.
    """

    time: float
    state: StateId
    amount: float


@beartype
@dataclass(frozen=True)
class _Scaled:
    """
    A payment function multiplied by a constant.
    """

    inner: TimeFunction
    factor: float

    def __call__(self, x: FloatArray) -> FloatArray:
        """
        Evaluate the scaled function.
        """
        return as_float_array(values=self.factor * self.inner(x))


@beartype
@dataclass(frozen=True)
class PaymentSpec:
    """
    Sojourn payment rates, transition payments and lump sums up to the
    horizon.

    Benefits are positive and premiums negative. All functions are treated
    as zero after the horizon.
    """

    horizon: float
    sojourn: Mapping[StateId, TimeFunction] = field(
        default_factory=dict,
    )
    transition: Mapping[tuple[StateId, StateId], TimeFunction] = field(
        default_factory=dict,
    )
    discrete: tuple[DiscretePayment, ...] = ()

    def __post_init__(self) -> None:
        """
        Check the lump sums and freeze the mappings.
        """
        if not np.isfinite(self.horizon) or self.horizon <= 0:
            msg = f"The horizon must be positive, got {self.horizon}."
            raise ValueError(msg)
        states = [
            *self.sojourn,
            *(state for pair in self.transition for state in pair),
            *(payment.state for payment in self.discrete),
        ]
        for state in states:
            if state.kind is StateKind.RETIRED_OBSERVED:
                msg = (
                    "Payments are defined on lumped states, "
                    f"got {state.label}."
                )
                raise ValueError(msg)
        times = [payment.time for payment in self.discrete]
        if any(later <= earlier for earlier, later in pairwise(times)):
            msg = "Lump sum times must be strictly increasing."
            raise ValueError(msg)
        if any(not 0 <= time <= self.horizon for time in times):
            msg = f"Lump sum times must lie in [0, {self.horizon}]."
            raise ValueError(msg)
        object.__setattr__(
            self,
            "sojourn",
            MappingProxyType(dict(self.sojourn)),
        )
        object.__setattr__(
            self,
            "transition",
            MappingProxyType(dict(self.transition)),
        )

    def _within_horizon(
        self,
        function: TimeFunction,
        t: float | FloatArray,
    ) -> FloatArray:
        """
        Evaluate ``function`` and set it to zero after the horizon.
        """
        time = as_float_array(values=t)
        values = np.broadcast_to(function(time), time.shape)
        return np.where(time <= self.horizon, values, 0.0)

    def sojourn_rate(
        self,
        state: StateId,
        t: float | FloatArray,
    ) -> FloatArray:
        """
        The payment rate per year while in ``state``.
        """
        function = self.sojourn.get(state)
        if function is None:
            return np.zeros_like(as_float_array(values=t))
        return self._within_horizon(function=function, t=t)

    def transition_amount(
        self,
        source: StateId,
        target: StateId,
        t: float | FloatArray,
    ) -> FloatArray:
        """
        The amount paid on a jump from ``source`` to ``target``.
        """
        function = self.transition.get((source, target))
        if function is None:
            return np.zeros_like(as_float_array(values=t))
        return self._within_horizon(function=function, t=t)

    def lump_sums_in(self, state: StateId) -> tuple[DiscretePayment, ...]:
        """
        The lump sums paid in ``state``.
        """
        return tuple(p for p in self.discrete if p.state == state)

    def scaled(self, factor: float) -> "PaymentSpec":
        """
        Every payment multiplied by ``factor``.
        """
        return PaymentSpec(
            horizon=self.horizon,
            sojourn={
                state: _Scaled(inner=function, factor=factor)
                for state, function in self.sojourn.items()
            },
            transition={
                pair: _Scaled(inner=function, factor=factor)
                for pair, function in self.transition.items()
            },
            discrete=tuple(
                DiscretePayment(
                    time=payment.time,
                    state=payment.state,
                    amount=factor * payment.amount,
                )
                for payment in self.discrete
            ),
        )

    @property
    def is_zero(self) -> bool:
        """
        Whether no payment function or lump sum is declared.
        """
        return not (self.sojourn or self.transition or self.discrete)
