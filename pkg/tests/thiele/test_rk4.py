"""
Tests for backward Runge-Kutta integration.
"""

import numpy as np

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.thiele.rk4 import (
    Stage,
    StageTable,
    integrate_backward,
    stage_table_from_nodes,
)


def _growth(stage: Stage, values: FloatArray) -> FloatArray:
    """
    ``W' = W``.
    """
    del stage
    return values


def test_exponential() -> None:
    """
    ``W' = W`` with ``W(n) = 1`` is ``exp(t - n)`` up to the fourth order
    error of the step.
    """
    grid = TimeGrid(horizon=2.0, step=0.05)
    values = integrate_backward(
        grid=grid,
        terminal=np.array([1.0, 2.0]),
        drift=_growth,
    )
    assert values.shape == (grid.size + 1, 2)
    np.testing.assert_allclose(
        values[:, 0],
        np.exp(grid.nodes - 2.0),
        rtol=1e-6,
    )
    np.testing.assert_allclose(values[:, 1], 2 * values[:, 0])


def test_fourth_order() -> None:
    """
    Halving the step divides the error at time zero by about sixteen.
    """
    errors = []
    for step in (0.2, 0.1, 0.05):
        values = integrate_backward(
            grid=TimeGrid(horizon=2.0, step=step),
            terminal=np.ones(()),
            drift=_growth,
        )
        errors.append(abs(values[0] - np.exp(-2.0)))
    ratios = np.array(errors[:-1]) / np.array(errors[1:])
    assert np.all(ratios > 14)


def test_scalar_terminal() -> None:
    """
    A scalar terminal value gives one value per node.
    """
    grid = TimeGrid(horizon=1.0, step=0.5)
    values = integrate_backward(
        grid=grid,
        terminal=np.zeros(()),
        drift=_growth,
    )
    assert values.shape == (3,)


def test_jumps_and_nodes() -> None:
    """
    Jumps are added when passing a node and every node is reported.
    """
    grid = TimeGrid(horizon=3.0, step=1.0)
    reported: list[int] = []

    def constant(stage: Stage, values: FloatArray) -> FloatArray:
        """
        ``W' = -1``.
        """
        del stage
        return -np.ones_like(values)

    values = integrate_backward(
        grid=grid,
        terminal=np.zeros(()),
        drift=constant,
        jumps={2: np.asarray(10.0), 0: np.asarray(100.0)},
        on_node=lambda node, _: reported.append(node),
    )
    np.testing.assert_allclose(values, [13.0, 12.0, 1.0, 0.0])
    assert reported == [3, 2, 1, 0]


def test_stages_read_left_limits() -> None:
    """
    The upper stage of a step sees the left limit of a table.
    """
    table = StageTable(
        right=np.array([0.0, 1.0, 2.0]),
        left=np.array([0.0, 1.0, 5.0]),
    )
    upper = table.at(stage=Stage(index=2, time=1.0, upper=True))
    assert isinstance(upper, np.ndarray)
    assert upper == 5.0
    assert table.at(stage=Stage(index=2, time=1.0, upper=False)) == 2.0
    continuous = StageTable.continuous(values=np.arange(3.0))
    assert continuous.at(stage=Stage(index=1, time=0.5, upper=True)) == 1.0


def test_cubic_midpoints() -> None:
    """
    Midpoints of a cubic polynomial are filled exactly.
    """
    nodes = np.arange(6.0)
    table = stage_table_from_nodes(values=nodes**3 - 2 * nodes)
    midpoints = np.arange(0.5, 5.0, 1.0)
    np.testing.assert_allclose(table.right[1::2], midpoints**3 - 2 * midpoints)
    np.testing.assert_array_equal(table.left, table.right)


def test_midpoints_between_jumps() -> None:
    """
    Splines are fitted separately on each side of a jump, and the left
    limit at the jump is the right limit plus the jump.
    """
    values = np.array([0.0, 1.0, 2.0, 0.0, 1.0, 2.0])
    table = stage_table_from_nodes(
        values=values,
        jumps={3: np.asarray(3.0)},
    )
    np.testing.assert_allclose(table.right[1:6:2], [0.5, 1.5, 2.5])
    np.testing.assert_allclose(table.right[7::2], [0.5, 1.5])
    assert table.left[6] == 3.0
    assert table.right[6] == 0.0
