"""
Uniform time grids.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from beartype import beartype

from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.payments import PaymentSpec

_ALIGNMENT_TOLERANCE = 1e-9


@beartype
@dataclass(frozen=True)
class TimeGrid:
    """
    The nodes ``0, h, 2h, ..., n``.
    """

    horizon: float
    step: float

    def __post_init__(self) -> None:
        """
        Check that the step divides the horizon.

        Raises:
            ValueError: The step or the horizon is not positive.
            GridMisaligned: The step does not divide the horizon.
        """
        if not self.step > 0 or not self.horizon > 0:
            msg = (
                "The grid step and horizon must be positive, got "
                f"step={self.step}, horizon={self.horizon}."
            )
            raise ValueError(msg)
        ratio = self.horizon / self.step
        if abs(ratio - round(ratio)) > _ALIGNMENT_TOLERANCE * max(ratio, 1):
            msg = (
                f"The step {self.step} does not divide the horizon "
                f"{self.horizon}."
            )
            raise GridMisaligned(msg)

    @property
    def size(self) -> int:
        """
        The number of steps ``M``.
        """
        return int(np.rint(self.horizon / self.step))

    @cached_property
    def nodes(self) -> FloatArray:
        """
        The ``M + 1`` nodes.
        """
        return np.linspace(0.0, self.horizon, num=self.size + 1)

    def refined(self) -> "TimeGrid":
        """
        The grid with half the step.

        Node ``i`` of this grid is node ``2 * i`` of the refined grid.
        """
        return TimeGrid(horizon=self.horizon, step=self.step / 2)

    def index_of(self, t: float) -> int:
        """
        The index of the node at ``t``.

        Raises:
            GridMisaligned: ``t`` is not a node.
        """
        position = t / self.step
        index = int(np.rint(position))
        if (
            not 0 <= index <= self.size
            or abs(position - index) > _ALIGNMENT_TOLERANCE * max(position, 1)
        ):
            msg = f"{t} is not a node of a grid with step {self.step}."
            raise GridMisaligned(msg)
        return index

    def contains(self, t: float) -> bool:
        """
        Whether ``t`` is a node.
        """
        try:
            self.index_of(t=t)
        except GridMisaligned:
            return False
        return True

    def check_payments(self, payments: PaymentSpec) -> None:
        """
        Check that every lump sum falls on a node.

        Raises:
            GridMisaligned: A lump sum is off the grid.
        """
        if not math.isclose(payments.horizon, self.horizon):
            msg = (
                f"The grid ends at {self.horizon} but the payments at "
                f"{payments.horizon}."
            )
            raise GridMisaligned(msg)
        for payment in payments.discrete:
            self.index_of(t=payment.time)
