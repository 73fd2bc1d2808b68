"""
Tests for intensities derived from the joint law.
"""

from typing import Literal

import numpy as np
import pytest

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.intensities import (
    backward_identity_check,
    intensity_tables,
    mu1,
    mu2,
    mu_bar,
)
from retirement_thiele.distributions.joint_law import joint_law
from retirement_thiele.distributions.occupation import solve_occupation
from retirement_thiele.exceptions import GridMisaligned
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.presets import (
    disability_retirement_model,
    term_insurance_model,
)
from tests.models import exponential_retirement_model


def test_constant_hazard() -> None:
    """
    With a constant mortality after retirement every death rate is that
    constant and the backward rate has a closed form.
    """
    a, c = 0.1, 0.05
    spec = exponential_retirement_model(
        retirement=a,
        retired_mortality=c,
        payments=PaymentSpec(horizon=10.0),
    )
    law = joint_law(spec=spec, grid=TimeGrid(horizon=10.0, step=0.1))
    for t, r in ((1.0, 0.0), (5.0, 2.5), (10.0, 10.0)):
        assert mu1(law=law, t=t, r=r) == pytest.approx(c, rel=1e-8)
    for t in (0.5, 5.0, 10.0):
        assert mu2(law=law, t=t) == pytest.approx(c, rel=1e-6)
        tail = a * np.exp(-c * t) * (1 - np.exp(-(a - c) * t)) / (a - c)
        expected = a * np.exp(-a * t) / tail
        assert mu_bar(law=law, t=t) == pytest.approx(expected, rel=1e-4)
    assert mu2(law=law, t=0.0) == 0
    assert mu_bar(law=law, t=0.0) == 0


def test_duration_dependent_hazard() -> None:
    """
    The death rate given the retirement time is the hazard at the time
    since retirement.
    """
    spec = exponential_retirement_model(
        retirement=0.1,
        retired_mortality=0.01,
        slope=0.002,
        payments=PaymentSpec(horizon=10.0),
    )
    law = joint_law(spec=spec, grid=TimeGrid(horizon=10.0, step=0.5))
    for t, r in ((2.0, 0.0), (8.0, 3.0), (10.0, 9.5)):
        assert mu1(law=law, t=t, r=r) == pytest.approx(
            0.01 + 0.002 * (t - r),
            rel=1e-10,
        )


def test_retirement_after_t() -> None:
    """
    The retirement time cannot be after ``t``.
    """
    spec = term_insurance_model(mortality=0.01, interest=0.0, horizon=10.0)
    law = joint_law(spec=spec, grid=TimeGrid(horizon=10.0, step=1.0))
    with pytest.raises(expected_exception=GridMisaligned):
        mu1(law=law, t=1.0, r=2.0)
    with pytest.raises(expected_exception=GridMisaligned):
        mu2(law=law, t=0.3)


def test_no_retirement() -> None:
    """
    Without retirement every retired intensity is zero.
    """
    spec = term_insurance_model(mortality=0.02, interest=0.0, horizon=10.0)
    law = joint_law(spec=spec, grid=TimeGrid(horizon=10.0, step=0.5))
    tables = intensity_tables(spec=spec, law=law)
    assert np.all(tables.mortality_retired == 0)
    assert np.all(tables.retirement_backward == 0)
    assert np.all(tables.retirement_backward_by_state == 0)


def test_tables_are_finite() -> None:
    """
    Every intensity is finite and not negative.
    """
    spec = disability_retirement_model(horizon=20.0)
    law = joint_law(spec=spec, grid=TimeGrid(horizon=20.0, step=0.5))
    tables = intensity_tables(spec=spec, law=law)
    for table in (
        tables.mortality_given_retirement,
        tables.mortality_given_history,
        tables.mortality_retired,
        tables.retirement_backward,
        tables.retirement_backward_by_state,
        tables.lumped_forward,
    ):
        assert np.all(np.isfinite(table))
        assert np.all(table >= 0)
    np.testing.assert_allclose(
        tables.retirement_backward_by_state.sum(axis=1),
        tables.retirement_backward,
        rtol=1e-12,
    )


@pytest.mark.parametrize(
    argnames="retired_mortality",
    argvalues=["health", "duration"],
)
def test_backward_identity(
    retired_mortality: Literal["health", "duration"],
) -> None:
    """
    The backward rate of retiring from ``k`` is the occupation of ``k``
    times the forward rate of retiring, divided by the occupation of ``p``.
    """
    spec = disability_retirement_model(
        horizon=40.0,
        retired_mortality=retired_mortality,
    )
    law = joint_law(spec=spec, grid=TimeGrid(horizon=40.0, step=0.25))
    discrepancy = backward_identity_check(
        spec=spec,
        law=law,
        occupation=law.occupation,
    )
    assert discrepancy < 1e-3


def test_backward_identity_needs_stage_lattice() -> None:
    """
    The occupation must be on the stage lattice of the law.
    """
    spec = disability_retirement_model(horizon=20.0)
    grid = TimeGrid(horizon=20.0, step=0.5)
    law = joint_law(spec=spec, grid=grid)
    with pytest.raises(expected_exception=GridMisaligned):
        backward_identity_check(
            spec=spec,
            law=law,
            occupation=solve_occupation(spec=spec, grid=grid),
        )
