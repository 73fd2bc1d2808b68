"""
Tests for discounting.
"""

import math

import numpy as np
import pytest
from hypothesis import example, given
from hypothesis import strategies as st

from retirement_thiele.exceptions import OutOfHorizon
from retirement_thiele.model.discount import DiscountCurve, discount_factor

_CURVE = DiscountCurve.from_short_rates(
    points=((0.0, 0.01), (10.0, 0.03), (20.0, 0.02)),
)


def test_constant_rate() -> None:
    """
    A constant rate compounds continuously.
    """
    curve = DiscountCurve.constant_rate(rate=0.03)
    np.testing.assert_allclose(curve.kappa(t=10.0), math.exp(0.3))
    np.testing.assert_allclose(curve.v(t=10.0), math.exp(-0.3))
    np.testing.assert_allclose(curve.rate(t=np.array([0.0, 5.0])), 0.03)


def test_short_rate_table() -> None:
    """
    The bank account integrates linearly interpolated short rates exactly
    and is flat beyond the last point.
    """
    integral = (0.01 + 0.03) / 2 * 10 + (0.03 + 0.02) / 2 * 10 + 0.02 * 5
    np.testing.assert_allclose(_CURVE.kappa(t=25.0), math.exp(integral))
    np.testing.assert_allclose(_CURVE.kappa(t=0.0), 1.0)
    np.testing.assert_allclose(_CURVE.rate(t=5.0), 0.02)


@given(
    times=st.lists(
        st.floats(min_value=0.0, max_value=30.0),
        min_size=3,
        max_size=3,
    ),
)
@example(times=[0.0, 0.0, 1.0])
def test_factors_multiply(times: list[float]) -> None:
    """
    Discounting from ``u`` to ``s`` and from ``s`` to ``t`` is discounting
    from ``u`` to ``t``.
    """
    t, s, u = sorted(times)
    product = discount_factor(
        t=t,
        s=s,
        curve=_CURVE,
        horizon=30.0,
    ) * discount_factor(t=s, s=u, curve=_CURVE, horizon=30.0)
    direct = discount_factor(t=t, s=u, curve=_CURVE, horizon=30.0)
    assert math.isclose(product, direct, rel_tol=1e-12, abs_tol=1e-15)


@pytest.mark.parametrize(
    argnames=("t", "s"),
    argvalues=[(-1.0, 1.0), (2.0, 1.0), (1.0, 31.0)],
)
def test_out_of_horizon(t: float, s: float) -> None:
    """
    Times must satisfy ``0 <= t <= s <= n``.
    """
    with pytest.raises(expected_exception=OutOfHorizon):
        discount_factor(t=t, s=s, curve=_CURVE, horizon=30.0)


@pytest.mark.parametrize(
    argnames="curve",
    argvalues=[DiscountCurve.constant_rate(rate=0.03), _CURVE],
)
def test_scalar_time(curve: DiscountCurve) -> None:
    """
    A single time gives zero-dimensional arrays.
    """
    for values in (curve.kappa(t=4.0), curve.v(t=4.0), curve.rate(t=4.0)):
        assert isinstance(values, np.ndarray)
        assert values.shape == ()
        assert values.dtype == np.float64
    np.testing.assert_allclose(curve.kappa(t=4.0) * curve.v(t=4.0), 1.0)
