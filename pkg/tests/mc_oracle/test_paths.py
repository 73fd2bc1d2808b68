"""
Tests for path sampling.
"""

from collections.abc import Mapping
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from retirement_thiele.exceptions import BadBound, NegativeIntensity
from retirement_thiele.mc_oracle.paths import (
    PathSample,
    dump_paths,
    path_set_of,
    simulate_paths,
)
from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import Constant, PiecewiseLinear
from retirement_thiele.model.intensities import Intensity, IntensitySpec
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import DEAD, StateId, StateSpace
from tests.models import (
    ACTIVE,
    RETIRED_ACTIVE,
    exponential_retirement_model,
    model,
)


def _bounded(
    rates: Mapping[tuple[StateId, StateId], Intensity],
    bound: float,
) -> ModelSpec:
    """
    A model with one pre-retirement state and a given rate bound.
    """
    states = StateSpace(sigma=1)
    return ModelSpec(
        states=states,
        intensities=IntensitySpec(states=states, rates=rates, sup_bound=bound),
        payments=PaymentSpec(horizon=10.0),
        discount=DiscountCurve.constant_rate(rate=0.0),
    )


def test_no_rates() -> None:
    """
    Without rates no path jumps.
    """
    spec = model(sigma=1, rates={}, payments=PaymentSpec(horizon=10.0))
    paths = simulate_paths(spec=spec, n_paths=500, seed=1)
    assert paths.n_paths == 500
    assert paths.jump_path.size == 0
    assert np.all(paths.initial == 0)
    assert np.all(np.isinf(paths.retirement_time))


def test_exponential_survival() -> None:
    """
    With a constant mortality the time of death is exponential.
    """
    rate = 0.5
    spec = model(
        sigma=1,
        rates={(ACTIVE, DEAD): Intensity(function=Constant(value=rate))},
        payments=PaymentSpec(horizon=10.0),
    )
    n_paths = 20_000
    paths = simulate_paths(spec=spec, n_paths=n_paths, seed=7)
    for t in (0.5, 1.0, 3.0):
        expected = np.exp(-rate * t)
        error = np.sqrt(expected * (1 - expected) / n_paths)
        surviving = float(np.mean(paths.death_time > t))
        assert abs(surviving - expected) < 4 * error
    assert np.all(paths.jump_state == 2)


def test_retirement_marks() -> None:
    """
    Retirement time, state retired from and pre-retirement duration are
    read off the paths.
    """
    spec = exponential_retirement_model(
        retirement=0.2,
        retired_mortality=0.1,
        mortality=0.05,
        payments=PaymentSpec(horizon=10.0),
    )
    paths = simulate_paths(spec=spec, n_paths=2000, seed=3)
    retired = np.isfinite(paths.retirement_time)
    assert retired.any()
    assert (~retired).any()
    np.testing.assert_array_equal(paths.retired_from[retired], 1)
    np.testing.assert_array_equal(paths.retired_from[~retired], 0)
    np.testing.assert_array_equal(
        paths.pre_duration[retired],
        paths.retirement_time[retired],
    )
    assert np.all(np.isnan(paths.pre_duration[~retired]))
    dead = np.isfinite(paths.death_time) & retired
    assert np.all(paths.death_time[dead] > paths.retirement_time[dead])
    index = int(np.flatnonzero(retired)[0])
    sample = paths.path(index=index)
    assert sample.retirement_time == paths.retirement_time[index]
    assert sample.state_at(t=10.0) in {RETIRED_ACTIVE, DEAD}


def test_reproducible() -> None:
    """
    Paths depend on the seed but not on the number of workers.
    """
    spec = exponential_retirement_model(
        retirement=0.2,
        retired_mortality=0.1,
        mortality=0.05,
        payments=PaymentSpec(horizon=10.0),
    )
    one = simulate_paths(
        spec=spec,
        n_paths=1000,
        seed=11,
        block_size=128,
        workers=1,
    )
    many = simulate_paths(
        spec=spec,
        n_paths=1000,
        seed=11,
        block_size=128,
        workers=4,
    )
    other = simulate_paths(spec=spec, n_paths=1000, seed=12, block_size=128)
    for field in ("initial", "jump_path", "jump_time", "jump_state"):
        np.testing.assert_array_equal(
            getattr(one, field),
            getattr(many, field),
        )
    assert not np.array_equal(one.jump_time, other.jump_time)


def test_rate_above_bound() -> None:
    """
    A rate above the declared bound is detected.
    """
    spec = _bounded(
        rates={(ACTIVE, DEAD): Intensity(function=Constant(value=1.0))},
        bound=0.5,
    )
    with pytest.raises(expected_exception=BadBound):
        simulate_paths(spec=spec, n_paths=100, seed=0)


def test_negative_rate() -> None:
    """
    A negative sampled rate is detected.
    """
    spec = _bounded(
        rates={
            (ACTIVE, DEAD): Intensity(
                function=PiecewiseLinear(
                    knots=(0.0, 10.0),
                    values=(0.1, -0.1),
                ),
            ),
        },
        bound=1.0,
    )
    with pytest.raises(expected_exception=NegativeIntensity):
        simulate_paths(spec=spec, n_paths=200, seed=0)


def test_no_paths() -> None:
    """
    At least one path is sampled.
    """
    spec = model(sigma=1, rates={}, payments=PaymentSpec(horizon=10.0))
    with pytest.raises(expected_exception=ValueError):
        simulate_paths(spec=spec, n_paths=0, seed=0)


def test_single_paths(tmp_path: Path) -> None:
    """
    Single paths are collected into columns and dumped with one row per
    state entered.
    """
    states = StateSpace(sigma=1)
    samples = [
        PathSample(
            states=states,
            horizon=10.0,
            initial=ACTIVE,
            jumps=((2.0, RETIRED_ACTIVE), (5.0, DEAD)),
        ),
        PathSample(states=states, horizon=10.0, initial=ACTIVE, jumps=()),
    ]
    paths = path_set_of(samples=samples)
    np.testing.assert_array_equal(paths.retirement_time, [2.0, np.inf])
    np.testing.assert_array_equal(paths.death_time, [5.0, np.inf])
    np.testing.assert_array_equal(paths.state_at(t=2.0), [1, 0])
    np.testing.assert_array_equal(paths.state_before(t=2.0), [0, 0])
    assert paths.path(index=0) == samples[0]
    frame = pd.read_csv(
        filepath_or_buffer=dump_paths(paths=paths, path=tmp_path / "p.csv"),
    )
    assert list(frame.columns) == ["path_id", "jump_time", "new_state"]
    assert list(frame["path_id"]) == [0, 0, 0, 1]
    assert list(frame["new_state"].astype(str)) == ["1", "2", "d", "1"]
