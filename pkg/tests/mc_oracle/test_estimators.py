"""
Tests for Monte Carlo estimators against the analytic solvers.
"""

import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.distributions.joint_law import joint_law
from retirement_thiele.distributions.occupation import solve_occupation
from retirement_thiele.exceptions import EmptyConditioning
from retirement_thiele.mc_oracle.conditioning import (
    Bin,
    InState,
    RetiredIn,
    RetiredWithHistory,
)
from retirement_thiele.mc_oracle.estimators import (
    McEstimate,
    empirical_occupation,
    estimate_backward_intensity,
    estimate_forward_intensity,
    estimate_reserve,
    history_refinement_check,
    pooled_mean,
)
from retirement_thiele.mc_oracle.paths import PathSet, simulate_paths
from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import Constant
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import DEAD, RETIRED, StateId
from retirement_thiele.thiele.retired import solve_g1, solve_g2
from tests.models import ACTIVE, exponential_retirement_model, model

_PENSION = PaymentSpec(
    horizon=10.0,
    sojourn={RETIRED: Constant(value=1.0)},
    transition={(RETIRED, DEAD): Constant(value=2.0)},
)
_GRID = TimeGrid(horizon=10.0, step=0.1)
_N_PATHS = 20_000
_RETIREMENT = 0.2
_MORTALITY = 0.01
_RETIRED_MORTALITY = 0.05


@pytest.fixture(name="markov_spec", scope="module")
def fixture_markov_spec() -> ModelSpec:
    """
    A model whose lumped chain is Markov.
    """
    return exponential_retirement_model(
        retirement=_RETIREMENT,
        retired_mortality=_RETIRED_MORTALITY,
        mortality=_MORTALITY,
        payments=_PENSION,
        interest=0.02,
    )


@pytest.fixture(name="markov_paths", scope="module")
def fixture_markov_paths(markov_spec: ModelSpec) -> PathSet:
    """
    Paths of the Markov model.
    """
    return simulate_paths(spec=markov_spec, n_paths=_N_PATHS, seed=2024)


def test_zero_payments(markov_paths: PathSet) -> None:
    """
    Without payments every reserve is exactly zero.
    """
    estimate = estimate_reserve(
        paths=markov_paths,
        cond=InState(time=5.0, state=RETIRED),
        payments=PaymentSpec(horizon=10.0),
        discount=DiscountCurve.constant_rate(rate=0.02),
    )
    assert estimate.mean == 0
    assert estimate.standard_error == 0
    assert estimate.reliable


def test_deterministic_annuity() -> None:
    """
    Without jumps the reserve is the value of an annuity certain.
    """
    rate = 0.02
    spec = model(
        sigma=1,
        rates={},
        payments=PaymentSpec(
            horizon=10.0,
            sojourn={ACTIVE: Constant(value=1.0)},
        ),
        interest=rate,
    )
    paths = simulate_paths(spec=spec, n_paths=50, seed=0)
    time = 3.0
    estimate = estimate_reserve(
        paths=paths,
        cond=InState(time=time, state=ACTIVE),
        payments=spec.payments,
        discount=spec.discount,
    )
    expected = (1 - np.exp(-rate * (10.0 - time))) / rate
    assert estimate.mean == pytest.approx(expected, abs=1e-6)
    assert estimate.standard_error == pytest.approx(0, abs=1e-9)
    assert not estimate.reliable


def test_pool_reserve(markov_spec: ModelSpec, markov_paths: PathSet) -> None:
    """
    The reserve of everybody retired agrees with the pool reserve.
    """
    law = joint_law(spec=markov_spec, grid=_GRID)
    g2 = solve_g2(spec=markov_spec, law=law, grid=_GRID)
    time = 5.0
    estimate = estimate_reserve(
        paths=markov_paths,
        cond=InState(time=time, state=RETIRED),
        payments=markov_spec.payments,
        discount=markov_spec.discount,
    )
    error = 4 * estimate.standard_error + 1e-3
    assert abs(estimate.mean - g2.at(t=time)) < error


def test_reserve_given_retirement_time() -> None:
    """
    With a duration-dependent mortality the reserve given a retirement
    time bin agrees with the reserve given the retirement time.
    """
    spec = exponential_retirement_model(
        retirement=_RETIREMENT,
        retired_mortality=0.01,
        slope=0.02,
        mortality=_MORTALITY,
        payments=_PENSION,
        interest=0.02,
    )
    paths = simulate_paths(spec=spec, n_paths=_N_PATHS, seed=77)
    law = joint_law(spec=spec, grid=_GRID)
    g1 = solve_g1(spec=spec, law=law, grid=_GRID)
    time = 5.0
    estimate = estimate_reserve(
        paths=paths,
        cond=RetiredIn(time=time, retirement=Bin(lower=2.0, upper=3.0)),
        payments=spec.payments,
        discount=spec.discount,
    )
    assert estimate.bin_width == 1.0
    error = 4 * estimate.standard_error + 0.02
    assert abs(estimate.mean - g1.at(t=time, r=2.5)) < error


def test_pooled_bins(markov_spec: ModelSpec, markov_paths: PathSet) -> None:
    """
    Pooling the estimates over a partition of retirement times gives the
    estimate over all retirees.
    """
    time = 5.0
    parts = [
        estimate_reserve(
            paths=markov_paths,
            cond=RetiredIn(time=time, retirement=retirement),
            payments=markov_spec.payments,
            discount=markov_spec.discount,
        )
        for retirement in (
            Bin(lower=0.0, upper=2.5),
            Bin(lower=2.5, upper=5.5),
        )
    ]
    whole = estimate_reserve(
        paths=markov_paths,
        cond=InState(time=time, state=RETIRED),
        payments=markov_spec.payments,
        discount=markov_spec.discount,
    )
    assert pooled_mean(estimates=parts) == pytest.approx(whole.mean, rel=1e-12)
    assert sum(part.n_effective for part in parts) == whole.n_effective


@settings(deadline=None, max_examples=20)
@given(split=st.floats(min_value=0.1, max_value=4.9))
def test_pooled_bins_at_any_split(
    markov_spec: ModelSpec,
    markov_paths: PathSet,
    split: float,
) -> None:
    """
    Pooling over any two retirement bins gives the estimate over all
    retirees.
    """
    time = 5.0
    parts = []
    for retirement in (
        Bin(lower=0.0, upper=split),
        Bin(lower=split, upper=time + 1.0),
    ):
        try:
            parts.append(
                estimate_reserve(
                    paths=markov_paths,
                    cond=RetiredIn(time=time, retirement=retirement),
                    payments=markov_spec.payments,
                    discount=markov_spec.discount,
                ),
            )
        except EmptyConditioning:
            continue
    whole = estimate_reserve(
        paths=markov_paths,
        cond=InState(time=time, state=RETIRED),
        payments=markov_spec.payments,
        discount=markov_spec.discount,
    )
    assert pooled_mean(estimates=parts) == pytest.approx(whole.mean, rel=1e-12)

@pytest.mark.parametrize(
    argnames=("target", "rate"),
    argvalues=[(RETIRED, _RETIREMENT), (DEAD, _MORTALITY)],
)
def test_forward_intensity(
    markov_paths: PathSet,
    target: StateId,
    rate: float,
) -> None:
    """
    Occurrences over exposure estimate a constant rate.
    """
    estimate = estimate_forward_intensity(
        paths=markov_paths,
        source=ACTIVE,
        target=target,
        t=3.0,
        bandwidth=1.0,
    )
    assert estimate.standard_error > 0
    assert abs(estimate.mean - rate) < 4 * estimate.standard_error


def test_forward_intensity_of_forbidden_jump(markov_paths: PathSet) -> None:
    """
    A jump which never happens has a zero rate.
    """
    estimate = estimate_forward_intensity(
        paths=markov_paths,
        source=RETIRED,
        target=ACTIVE,
        t=3.0,
        bandwidth=1.0,
    )
    assert estimate.mean == 0
    assert estimate.standard_error == 0


def test_backward_intensity(markov_paths: PathSet) -> None:
    """
    The fraction of retirees who just retired matches its exact value.
    """
    time, bandwidth = 5.0, 0.25
    estimate = estimate_backward_intensity(
        paths=markov_paths,
        source=ACTIVE,
        target=RETIRED,
        t=time,
        bandwidth=bandwidth,
    )
    decay = _RETIREMENT + _MORTALITY - _RETIRED_MORTALITY
    expected = (
        np.exp(-decay * (time - bandwidth)) - np.exp(-decay * time)
    ) / (bandwidth * (1 - np.exp(-decay * time)))
    assert abs(estimate.mean - expected) < 4 * estimate.standard_error
    anywhere = estimate_backward_intensity(
        paths=markov_paths,
        source=None,
        target=RETIRED,
        t=time,
        bandwidth=bandwidth,
    )
    assert anywhere.mean == estimate.mean


def test_backward_bandwidth(markov_paths: PathSet) -> None:
    """
    The window before ``t`` must start after zero.
    """
    with pytest.raises(expected_exception=ValueError):
        estimate_backward_intensity(
            paths=markov_paths,
            source=ACTIVE,
            target=RETIRED,
            t=0.5,
            bandwidth=1.0,
        )
    with pytest.raises(expected_exception=ValueError):
        estimate_forward_intensity(
            paths=markov_paths,
            source=ACTIVE,
            target=RETIRED,
            t=0.5,
            bandwidth=0.0,
        )


def test_empty_conditioning() -> None:
    """
    Conditioning on an event no path is in is an error.
    """
    spec = model(sigma=1, rates={}, payments=_PENSION)
    paths = simulate_paths(spec=spec, n_paths=100, seed=0)
    with pytest.raises(expected_exception=EmptyConditioning):
        estimate_reserve(
            paths=paths,
            cond=InState(time=5.0, state=RETIRED),
            payments=spec.payments,
            discount=spec.discount,
        )
    with pytest.raises(expected_exception=EmptyConditioning):
        estimate_backward_intensity(
            paths=paths,
            source=None,
            target=RETIRED,
            t=5.0,
            bandwidth=1.0,
        )
    with pytest.raises(expected_exception=EmptyConditioning):
        pooled_mean(estimates=[])


def test_few_paths_warn(
    markov_spec: ModelSpec,
    markov_paths: PathSet,
    caplog: pytest.LogCaptureFixture,
) -> None:
    """
    An estimate from fewer paths than asked for is flagged.
    """
    with caplog.at_level(level=logging.WARNING):
        estimate = estimate_reserve(
            paths=markov_paths,
            cond=RetiredIn(time=5.0, retirement=Bin(lower=0.0, upper=0.1)),
            payments=markov_spec.payments,
            discount=markov_spec.discount,
            min_effective=10_000,
        )
    assert not estimate.reliable
    assert "paths satisfy" in caplog.text


def test_z_score() -> None:
    """
    A zero standard error gives a zero or infinite score.
    """
    estimate = McEstimate(mean=1.0, standard_error=0.5, n_effective=10)
    assert estimate.z_score(value=0.0) == 2.0
    exact = McEstimate(mean=1.0, standard_error=0.0, n_effective=10)
    assert exact.z_score(value=1.0) == 0
    assert exact.z_score(value=2.0) == -np.inf


def test_history_refinement(
    markov_spec: ModelSpec,
    markov_paths: PathSet,
) -> None:
    """
    In a Markov model refining by the pre-retirement duration changes
    nothing beyond noise.
    """
    check = history_refinement_check(
        paths=markov_paths,
        cond=RetiredWithHistory(
            time=5.0,
            retirement=Bin(lower=0.0, upper=5.5),
            retired_from=1,
        ),
        duration_bins=[
            Bin(lower=0.0, upper=2.0),
            Bin(lower=2.0, upper=4.0),
            Bin(lower=4.0, upper=5.5),
            Bin(lower=8.0, upper=9.0),
        ],
        payments=markov_spec.payments,
        discount=markov_spec.discount,
    )
    assert check.refined[-1] is None
    assert np.isnan(check.z_scores[-1])
    assert np.all(np.isfinite(check.z_scores[:-1]))
    assert check.passes(threshold=4.0)


def test_occupation(markov_spec: ModelSpec, markov_paths: PathSet) -> None:
    """
    Fractions of paths in each state agree with the forward equations.
    """
    times = np.array([2.0, 5.0, 8.0])
    fractions, errors = empirical_occupation(paths=markov_paths, times=times)
    occupation = solve_occupation(spec=markov_spec, grid=_GRID)
    indices = [_GRID.index_of(t=float(t)) for t in times]
    expected = occupation.extended[indices]
    np.testing.assert_array_less(
        np.abs(fractions - expected),
        4 * errors + 1e-3,
    )
    np.testing.assert_allclose(fractions.sum(axis=1), 1.0)
