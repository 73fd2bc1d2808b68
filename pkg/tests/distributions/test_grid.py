"""
Tests for time grids.
"""

import numpy as np
import pytest

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.model.payments import DiscretePayment, PaymentSpec
from retirement_thiele.model.states import pre_retirement


def test_nodes() -> None:
    """
    A grid has ``n / h + 1`` evenly spaced nodes.
    """
    grid = TimeGrid(horizon=1.0, step=0.25)
    assert grid.size == 4
    np.testing.assert_allclose(grid.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])


def test_refined() -> None:
    """
    Node ``i`` is node ``2 i`` of the refined grid.
    """
    grid = TimeGrid(horizon=3.0, step=0.1)
    refined = grid.refined()
    assert refined.size == 2 * grid.size
    np.testing.assert_allclose(refined.nodes[::2], grid.nodes)


def test_index_of() -> None:
    """
    Nodes are found up to rounding; other times are not nodes.
    """
    grid = TimeGrid(horizon=3.0, step=0.1)
    assert grid.index_of(t=0.3) == 3
    assert grid.index_of(t=3.0) == 30
    assert grid.contains(t=1.7)
    assert not grid.contains(t=0.15)
    assert not grid.contains(t=3.1)


def test_step_must_divide_horizon() -> None:
    """
    The step must divide the horizon.
    """
    with pytest.raises(expected_exception=GridMisaligned):
        TimeGrid(horizon=1.0, step=0.3)


def test_step_must_be_positive() -> None:
    """
    The step must be positive.
    """
    with pytest.raises(expected_exception=ValueError):
        TimeGrid(horizon=1.0, step=0.0)


def test_check_payments() -> None:
    """
    Lump sums must fall on nodes and the horizons must agree.
    """
    active = pre_retirement(index=1)
    grid = TimeGrid(horizon=10.0, step=1.0)
    grid.check_payments(
        payments=PaymentSpec(
            horizon=10.0,
            discrete=(DiscretePayment(time=5.0, state=active, amount=1.0),),
        ),
    )
    with pytest.raises(expected_exception=GridMisaligned):
        grid.check_payments(
            payments=PaymentSpec(
                horizon=10.0,
                discrete=(
                    DiscretePayment(time=5.5, state=active, amount=1.0),
                ),
            ),
        )
    with pytest.raises(expected_exception=GridMisaligned):
        grid.check_payments(payments=PaymentSpec(horizon=20.0))
