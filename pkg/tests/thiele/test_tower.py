"""
Tests for the tower property between the retired reserves.
"""

import numpy as np
import pytest

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.joint_law import joint_law
from retirement_thiele.model.functions import Constant
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.states import DEAD, RETIRED
from retirement_thiele.thiele.retired import solve_g1, solve_g2
from retirement_thiele.thiele.surfaces import Regime
from retirement_thiele.thiele.tower import pool_average, tower_gap
from tests.models import exponential_retirement_model

_PENSION = PaymentSpec(
    horizon=10.0,
    sojourn={RETIRED: Constant(value=1.0)},
    transition={(RETIRED, DEAD): Constant(value=2.0)},
)
_GRID = TimeGrid(horizon=10.0, step=0.1)


@pytest.mark.parametrize(
    argnames=("slope", "tolerance"),
    argvalues=[(0.0, 1e-4), (0.02, 1e-2)],
)
def test_pool_average_is_g2(slope: float, tolerance: float) -> None:
    """
    Averaging the reserve given the retirement time over the retired pool
    gives the pool reserve.
    """
    spec = exponential_retirement_model(
        retirement=0.2,
        retired_mortality=0.01,
        slope=slope,
        mortality=0.01,
        payments=_PENSION,
    )
    law = joint_law(spec=spec, grid=_GRID)
    g1 = solve_g1(spec=spec, law=law, grid=_GRID)
    g2 = solve_g2(spec=spec, law=law, grid=_GRID, g1=g1)
    gap = tower_gap(g1=g1, g2=g2, law=law)
    scale = float(np.max(np.abs(g2.values)))
    assert np.max(np.abs(gap.values)) < tolerance * scale
    assert gap.values[0] == 0
    assert gap.regime is Regime.G2


def test_constant_in_retirement_time() -> None:
    """
    A reserve which does not depend on the retirement time is its own
    average.
    """
    spec = exponential_retirement_model(
        retirement=0.2,
        retired_mortality=0.05,
        payments=_PENSION,
    )
    grid = TimeGrid(horizon=10.0, step=0.5)
    law = joint_law(spec=spec, grid=grid)
    g1 = solve_g1(spec=spec, law=law, grid=grid)
    average = pool_average(g1=g1, law=law)
    np.testing.assert_allclose(average.values, g1.diagonal())
