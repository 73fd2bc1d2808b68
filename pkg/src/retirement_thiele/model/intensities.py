"""
Transition rates of the extended chain.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np
from beartype import beartype

from retirement_thiele.model.functions import (
    FloatArray,
    TimeFunction,
    as_float_array,
)
from retirement_thiele.model.states import StateId, StateSpace

_SMALLEST_BOUND = 1e-3


@beartype
@dataclass(frozen=True)
class Intensity:
    """
    A transition rate ``mu(t, u)`` per year.

    ``t`` is calendar time and ``u`` is the duration argument: the time spent
    in the current state for pre-retirement states, the time since retirement
    for retired states. A rate which is not ``duration_dependent`` ignores
    ``u`` and its function is applied to ``t``.
    """

    function: TimeFunction
    duration_dependent: bool = False

    def __call__(
        self,
        t: float | FloatArray,
        u: float | FloatArray,
    ) -> FloatArray:
        """
        Evaluate the rate, broadcasting ``t`` against ``u``.
        """
        time, duration = np.broadcast_arrays(
            as_float_array(values=t),
            as_float_array(values=u),
        )
        argument = duration if self.duration_dependent else time
        values = self.function(np.array(argument, dtype=np.float64))
        return np.broadcast_to(values, time.shape).astype(np.float64)


@beartype
@dataclass(frozen=True)
class IntensitySpec:
    """
    Rates for ordered pairs of extended states, with a bound on the total
    outgoing rate of every state.

    Pairs which are not listed have rate zero.
    """

    states: StateSpace
    rates: Mapping[tuple[StateId, StateId], Intensity]
    sup_bound: float
    _pairs: tuple[tuple[StateId, StateId, Intensity], ...] = field(
        init=False,
        repr=False,
        compare=False,
    )

    def __post_init__(self) -> None:
        """
        Freeze the rates and check the pairs exist.
        """
        for source, target in self.rates:
            self.states.check(state=source)
            self.states.check(state=target)
            self.states.extended_position(state=source)
            self.states.extended_position(state=target)
        if not np.isfinite(self.sup_bound) or self.sup_bound <= 0:
            msg = (
                f"sup_bound must be finite and positive, got {self.sup_bound}."
            )
            raise ValueError(msg)
        pairs = sorted(
            (
                (source, target, intensity)
                for (source, target), intensity in self.rates.items()
            ),
            key=lambda item: (
                self.states.extended_position(state=item[0]),
                self.states.extended_position(state=item[1]),
            ),
        )
        object.__setattr__(self, "rates", MappingProxyType(dict(self.rates)))
        object.__setattr__(self, "_pairs", tuple(pairs))

    def rate(self, source: StateId, target: StateId) -> Intensity | None:
        """
        The rate from ``source`` to ``target`` if one is declared.
        """
        return self.rates.get((source, target))

    def pairs(self) -> tuple[tuple[StateId, StateId, Intensity], ...]:
        """
        All declared pairs ordered by source and target position.
        """
        return self._pairs

    def pairs_from(
        self,
        source: StateId,
    ) -> list[tuple[StateId, Intensity]]:
        """
        The declared destinations of ``source`` and their rates.
        """
        return [
            (target, intensity)
            for pair_source, target, intensity in self.pairs()
            if pair_source == source
        ]

    def is_markov(self, source: StateId, target: StateId) -> bool:
        """
        Whether the rate of a pair ignores the duration argument.
        """
        intensity = self.rate(source=source, target=target)
        return intensity is None or not intensity.duration_dependent

    def scan_bound(self, horizon: float, *, points: int = 101) -> float:
        """
        The largest total outgoing rate found on a square grid of ``(t, u)``
        values in ``[0, horizon]``.
        """
        t, u = np.meshgrid(
            np.linspace(0.0, horizon, num=points),
            np.linspace(0.0, horizon, num=points),
            indexing="ij",
        )
        largest = 0.0
        for source in self.states.extended_states:
            total = np.zeros_like(t)
            for _, intensity in self.pairs_from(source=source):
                total += intensity(t=t, u=u)
            largest = max(largest, float(np.max(total)))
        return largest


@beartype
def scanned_intensity_spec(
    *,
    states: StateSpace,
    rates: Mapping[tuple[StateId, StateId], Intensity],
    horizon: float,
    safety: float = 1.5,
) -> IntensitySpec:
    """
    Rates with a bound derived from a grid scan times ``safety``.
    """
    scan = IntensitySpec(states=states, rates=rates, sup_bound=1.0)
    largest = scan.scan_bound(horizon=horizon)
    return IntensitySpec(
        states=states,
        rates=rates,
        sup_bound=max(largest * safety, _SMALLEST_BOUND),
    )
