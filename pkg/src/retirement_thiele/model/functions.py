"""
Deterministic functions of one real argument, evaluated on arrays.

Rates and payment functions are built from these. Every function maps an
array of arguments to an array of values of the same shape.
"""

from collections.abc import Callable
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
import numpy.typing as npt
from beartype import beartype

FloatArray: TypeAlias = npt.NDArray[np.float64]
TimeFunction: TypeAlias = Callable[[FloatArray], FloatArray]

_MIN_KNOTS = 2


@beartype
def as_float_array(values: float | FloatArray) -> FloatArray:
    """
    Return ``values`` as a float array.
    """
    return np.asarray(values, dtype=np.float64)


@beartype
@dataclass(frozen=True)
class Constant:
    """
    A constant function.
    """

    value: float

    def __call__(self, x: FloatArray) -> FloatArray:
        """
        Evaluate the function.
        """
        return np.full_like(as_float_array(values=x), fill_value=self.value)


@beartype
@dataclass(frozen=True)
class GompertzMakeham:
    """
    ``a + b * exp(c * (age + x))``.
    """

    a: float
    b: float
    c: float
    age: float = 0.0

    def __call__(self, x: FloatArray) -> FloatArray:
        """
        Evaluate the function.
        """
        argument = as_float_array(values=x)
        return as_float_array(
            values=self.a + self.b * np.exp(self.c * (self.age + argument)),
        )


@beartype
@dataclass(frozen=True)
class PiecewiseLinear:
    """
    Linear interpolation between knots, extended linearly beyond the first
    and the last knot.
    """

    knots: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        """
        Check the knots.
        """
        if len(self.knots) != len(self.values) or len(self.knots) < _MIN_KNOTS:
            msg = "A piecewise linear function needs two or more knots."
            raise ValueError(msg)
        if np.any(np.diff(self.knots) <= 0):
            msg = "Knots must be strictly increasing."
            raise ValueError(msg)

    def __call__(self, x: FloatArray) -> FloatArray:
        """
        Evaluate the function.
        """
        argument = as_float_array(values=x)
        knots = np.asarray(self.knots)
        values = np.asarray(self.values)
        inside = np.interp(argument, knots, values)
        left_slope = (values[1] - values[0]) / (knots[1] - knots[0])
        right_slope = (values[-1] - values[-2]) / (knots[-1] - knots[-2])
        below = values[0] + left_slope * (argument - knots[0])
        above = values[-1] + right_slope * (argument - knots[-1])
        return np.where(
            argument < knots[0],
            below,
            np.where(argument > knots[-1], above, inside),
        )


@beartype
@dataclass(frozen=True)
class LinearTable:
    """
    Linear interpolation between table points, flat beyond the first and the
    last point.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        """
        Check the points.
        """
        if not self.points:
            msg = "A table needs at least one point."
            raise ValueError(msg)
        abscissae = [x for x, _ in self.points]
        if np.any(np.diff(abscissae) <= 0):
            msg = "Table abscissae must be strictly increasing."
            raise ValueError(msg)

    def __call__(self, x: FloatArray) -> FloatArray:
        """
        Evaluate the function.
        """
        abscissae = np.asarray([point[0] for point in self.points])
        ordinates = np.asarray([point[1] for point in self.points])
        return as_float_array(
            values=np.interp(as_float_array(values=x), abscissae, ordinates),
        )


@beartype
@dataclass(frozen=True)
class Windowed:
    """
    A function which is zero outside of ``[start, end)``.
    """

    inner: TimeFunction
    start: float = 0.0
    end: float = float("inf")

    def __call__(self, x: FloatArray) -> FloatArray:
        """
        Evaluate the function.
        """
        argument = as_float_array(values=x)
        inside = (argument >= self.start) & (argument < self.end)
        return np.where(inside, self.inner(argument), 0.0)


ZERO = Constant(value=0.0)
