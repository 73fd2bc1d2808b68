"""
Tests for the classic Thiele system of the extended chain.
"""

import numpy as np
import pytest

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.exceptions import NonMarkovPreRetirement
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.presets import (
    disability_retirement_model,
    term_insurance_model,
)
from retirement_thiele.model.states import DEAD, pre_retirement
from retirement_thiele.thiele.extended import solve_extended_markov
from retirement_thiele.thiele.surfaces import Regime


@pytest.mark.parametrize(argnames="step", argvalues=[0.01, 1e-3])
def test_term_insurance(step: float) -> None:
    """
    A term insurance with constant mortality and interest has a closed
    form value.
    """
    mortality, rate, horizon = 0.02, 0.03, 40.0
    spec = term_insurance_model(
        mortality=mortality,
        interest=rate,
        horizon=horizon,
    )
    grid = TimeGrid(horizon=horizon, step=step)
    reserves = solve_extended_markov(spec=spec, grid=grid)
    total = mortality + rate
    remaining = horizon - grid.nodes
    expected = mortality / total * (1 - np.exp(-total * remaining))
    active = reserves[pre_retirement(index=1)]
    np.testing.assert_allclose(active.values, expected, atol=1e-8)
    assert active.at(t=0.0) == pytest.approx(0.4 * (1 - np.exp(-2.0)))
    assert active.regime is Regime.EXTENDED
    np.testing.assert_array_equal(reserves[DEAD].values, 0.0)


def test_zero_payments() -> None:
    """
    Without payments every reserve is zero.
    """
    spec = disability_retirement_model(horizon=20.0, hazards="constant")
    spec = spec.with_payments(payments=PaymentSpec(horizon=20.0))
    reserves = solve_extended_markov(
        spec=spec,
        grid=TimeGrid(horizon=20.0, step=0.5),
    )
    assert len(reserves) == 5
    for curve in reserves.values():
        np.testing.assert_array_equal(curve.values, 0.0)


@pytest.mark.parametrize(argnames="factor", argvalues=[-2.5, 0.0, 3.0])
def test_linear_in_payments(factor: float) -> None:
    """
    Scaling every payment scales every reserve.
    """
    spec = disability_retirement_model(horizon=20.0)
    grid = TimeGrid(horizon=20.0, step=0.5)
    reserves = solve_extended_markov(spec=spec, grid=grid)
    scaled = solve_extended_markov(
        spec=spec.with_payments(payments=spec.payments.scaled(factor=factor)),
        grid=grid,
    )
    for state, curve in reserves.items():
        np.testing.assert_allclose(
            scaled[state].values,
            factor * curve.values,
            rtol=1e-9,
            atol=1e-9,
        )


def test_lump_sum_jump() -> None:
    """
    A lump sum paid to actives moves the active reserve across its time by
    the amount paid.
    """
    spec = disability_retirement_model(horizon=20.0)
    grid = TimeGrid(horizon=20.0, step=0.5)
    without = solve_extended_markov(
        spec=disability_retirement_model(horizon=20.0, lump_sum=False),
        grid=grid,
    )
    active = pre_retirement(index=1)
    difference = (
        solve_extended_markov(spec=spec, grid=grid)[active].values
        - without[active].values
    )
    node = grid.index_of(t=10.0)
    np.testing.assert_array_equal(difference[node:], 0.0)
    assert difference[node - 1] > 0


def test_duration_dependent() -> None:
    """
    The extended chain must be Markov.
    """
    spec = disability_retirement_model(
        horizon=20.0,
        retired_mortality="duration",
    )
    with pytest.raises(expected_exception=NonMarkovPreRetirement):
        solve_extended_markov(spec=spec, grid=TimeGrid(horizon=20.0, step=1.0))
