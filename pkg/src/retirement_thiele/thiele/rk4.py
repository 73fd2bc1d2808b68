"""
Backward classic Runge-Kutta integration from a terminal condition.

A step from node ``i + 1`` down to node ``i`` evaluates the drift at stage
nodes ``2 * i + 2``, ``2 * i + 1`` (twice) and ``2 * i`` of the refined grid,
so drifts can read tables sampled on the refined grid. The evaluation at node
``i + 1`` is flagged as ``upper``: quantities with jumps must be read as left
limits there.
"""

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np
from beartype import beartype
from scipy.interpolate import CubicSpline

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.model.functions import FloatArray


@beartype
@dataclass(frozen=True)
class Stage:
    """
    Where a drift is evaluated.

    Attributes:
        index: The node of the refined grid.
        time: The time of that node.
        upper: Whether this is the right end of the step.
    """

    index: int
    time: float
    upper: bool


@runtime_checkable
class Drift(Protocol):
    """
    The time derivative of a reserve.
    """

    def __call__(self, stage: Stage, values: FloatArray) -> FloatArray:
        """
        The derivative at ``stage`` given ``values``.
        """


@beartype
@dataclass(frozen=True)
class StageTable:
    """
    A piecewise continuous quantity on the nodes of a refined grid.

    ``right`` holds right limits and ``left`` left limits; they differ only
    at jumps.
    """

    right: FloatArray
    left: FloatArray

    @classmethod
    def continuous(cls, values: FloatArray) -> "StageTable":
        """
        A table without jumps.
        """
        return cls(right=values, left=values)

    def at(self, stage: Stage) -> FloatArray:
        """
        The value seen from inside the step being integrated.
        """
        table = self.left if stage.upper else self.right
        return np.asarray(table[stage.index], dtype=np.float64)


@beartype
def stage_table_from_nodes(
    values: FloatArray,
    jumps: Mapping[int, FloatArray] | None = None,
) -> StageTable:
    """
    Fill the midpoints of node values by cubic splines.

    ``values[i]`` is the right limit at node ``i`` and ``jumps[i]`` the
    difference between the left and the right limit there. Splines are fitted
    separately between consecutive jumps.
    """
    jumps = {} if jumps is None else jumps
    size = values.shape[0] - 1
    right = np.zeros((2 * size + 1, *values.shape[1:]))
    right[::2] = values
    left = right.copy()
    for node, jump in jumps.items():
        if 0 < node <= size:
            left[2 * node] = left[2 * node] + jump
    breaks = sorted(node for node in jumps if 0 < node < size)
    for start, end in zip([0, *breaks], [*breaks, size], strict=True):
        points = np.arange(start, end + 1, dtype=np.float64)
        segment = values[start : end + 1].copy()
        segment[-1] = left[2 * end]
        spline = CubicSpline(points, segment, axis=0)
        right[2 * start + 1 : 2 * end : 2] = spline(points[:-1] + 0.5)
    left[1::2] = right[1::2]
    return StageTable(right=right, left=left)


@beartype
def integrate_backward(
    *,
    grid: TimeGrid,
    terminal: FloatArray,
    drift: Drift,
    jumps: Mapping[int, FloatArray] | None = None,
    on_node: Callable[[int, FloatArray], None] | None = None,
) -> FloatArray:
    """
    Solve ``W' = drift`` backward from ``W(n) = terminal``.

    ``jumps[i]`` is added when passing node ``i`` from the right: the stored
    value at a node is the right limit and ``W(t_i-) = W(t_i) + jumps[i]``.
    Jumps at node zero are never applied. ``on_node(i, value)`` is called
    for every stored node value, the terminal one first, before the next
    step starts.

    Returns an array whose row ``i`` is the value at node ``i``.
    """
    jumps = {} if jumps is None else jumps
    nodes = grid.nodes
    step = grid.step
    half = step / 2
    current = np.atleast_1d(np.array(terminal, dtype=np.float64))
    values = np.zeros((grid.size + 1, *current.shape))
    values[grid.size] = current
    if on_node is not None:
        on_node(grid.size, current)
    for i in range(grid.size - 1, -1, -1):
        if i + 1 in jumps:
            current = current + jumps[i + 1]
        upper = float(nodes[i + 1])
        middle = Stage(index=2 * i + 1, time=upper - half, upper=False)
        k1 = drift(
            stage=Stage(index=2 * i + 2, time=upper, upper=True),
            values=current,
        )
        k2 = drift(stage=middle, values=current - half * k1)
        k3 = drift(stage=middle, values=current - half * k2)
        k4 = drift(
            stage=Stage(index=2 * i, time=float(nodes[i]), upper=False),
            values=current - step * k3,
        )
        current = current - step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        values[i] = current
        if on_node is not None:
            on_node(i, current)
    return values.reshape((grid.size + 1, *terminal.shape))
