"""
Deterministic continuous discounting.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.exceptions import OutOfHorizon
from retirement_thiele.model.functions import FloatArray, as_float_array

_TIME_TOLERANCE = 1e-12


@beartype
@dataclass(frozen=True)
class _PiecewiseLinearShortRate:
    """
    A short rate interpolated linearly between knots, flat outside of them.
    """

    knots: tuple[float, ...]
    rates: tuple[float, ...]

    def __call__(self, t: FloatArray) -> FloatArray:
        """
        The short rate at ``t``.
        """
        knots, rates = np.asarray(self.knots), np.asarray(self.rates)
        return as_float_array(values=np.interp(t, knots, rates))

    def integral(self, t: FloatArray) -> FloatArray:
        """
        The exact integral of the short rate from zero to ``t``.
        """
        knots = np.asarray(self.knots)
        rates = np.asarray(self.rates)
        at_knots = np.concatenate(
            ([0.0], np.cumsum(np.diff(knots) * (rates[1:] + rates[:-1]) / 2)),
        )

        def from_first_knot(x: FloatArray) -> FloatArray:
            """
            The integral from the first knot to ``x``.
            """
            segment = np.clip(
                np.searchsorted(knots, x, side="right") - 1,
                0,
                max(len(knots) - 2, 0),
            )
            if len(knots) == 1:
                return rates[0] * (x - knots[0])
            start = knots[segment]
            width = knots[segment + 1] - start
            slope = (rates[segment + 1] - rates[segment]) / width
            offset = np.clip(x - start, 0.0, width)
            inside = (
                at_knots[segment]
                + rates[segment] * offset
                + slope * offset**2 / 2
            )
            below = rates[0] * np.minimum(x - knots[0], 0.0)
            above = rates[-1] * np.maximum(x - knots[-1], 0.0)
            return inside + below + above

        return as_float_array(
            values=from_first_knot(t) - from_first_knot(np.zeros_like(t)),
        )


@beartype
@dataclass(frozen=True)
class DiscountCurve:
    """
    A bank account ``kappa`` with ``kappa(0) = 1`` and its short rate.

    ``v = 1 / kappa`` discounts a payment at time ``t`` to time zero.
    """

    bank_account: Callable[[FloatArray], FloatArray]
    short_rate: Callable[[FloatArray], FloatArray]

    @classmethod
    def constant_rate(cls, rate: float) -> "DiscountCurve":
        """
        Continuous compounding at a constant rate.
        """
        return cls(
            bank_account=lambda t: np.exp(rate * t),
            short_rate=lambda t: np.full_like(t, fill_value=rate),
        )

    @classmethod
    def from_short_rates(
        cls,
        points: tuple[tuple[float, float], ...],
    ) -> "DiscountCurve":
        """
        Short rates given at ``(time, rate)`` points, interpolated linearly.
        """
        if not points:
            msg = "A short rate table needs at least one point."
            raise ValueError(msg)
        knots = tuple(float(time) for time, _ in points)
        if np.any(np.diff(knots) <= 0):
            msg = "Short rate times must be strictly increasing."
            raise ValueError(msg)
        short_rate = _PiecewiseLinearShortRate(
            knots=knots,
            rates=tuple(float(rate) for _, rate in points),
        )
        return cls(
            bank_account=lambda t: np.exp(short_rate.integral(t=t)),
            short_rate=short_rate,
        )

    def kappa(self, t: float | FloatArray) -> FloatArray:
        """
        The bank account at ``t``.
        """
        time = as_float_array(values=t)
        return np.asarray(self.bank_account(time), dtype=np.float64)

    def v(self, t: float | FloatArray) -> FloatArray:
        """
        The discount factor from ``t`` to time zero.
        """
        return as_float_array(values=1.0 / self.kappa(t=t))

    def rate(self, t: float | FloatArray) -> FloatArray:
        """
        The short rate ``kappa' / kappa`` at ``t``.
        """
        time = as_float_array(values=t)
        values = np.asarray(self.short_rate(time), dtype=np.float64)
        return np.broadcast_to(values, time.shape).astype(np.float64)


@beartype
def discount_factor(
    t: float,
    s: float,
    *,
    curve: DiscountCurve,
    horizon: float,
) -> float:
    """
    The value at ``t`` of one unit paid at ``s``, ``kappa(t) / kappa(s)``.

    Raises:
        OutOfHorizon: ``t`` is negative, ``s`` is after the horizon or ``t``
            is after ``s``.
    """
    if t < 0 or s > horizon + _TIME_TOLERANCE or t > s:
        msg = f"Need 0 <= t <= s <= {horizon}, got t={t}, s={s}."
        raise OutOfHorizon(msg)
    if t == s:
        return 1.0
    return float(curve.kappa(t=t) / curve.kappa(t=s))
