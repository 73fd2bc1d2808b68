"""
Rate matrices of the extended chain.
"""

import numpy as np
from beartype import beartype

from retirement_thiele.exceptions import NonMarkovPreRetirement
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import StateKind


@beartype
def require_markov_pre_retirement(spec: ModelSpec) -> None:
    """
    Check that no rate out of a pre-retirement state depends on the
    duration.

    Raises:
        NonMarkovPreRetirement: A pre-retirement rate is duration-dependent.
    """
    for source, target, intensity in spec.intensities.pairs():
        if (
            source.kind is StateKind.PRE_RETIREMENT
            and intensity.duration_dependent
        ):
            msg = (
                f"The rate from {source.label} to {target.label} depends on "
                "the duration; use the Monte Carlo oracle for this model."
            )
            raise NonMarkovPreRetirement(msg)


@beartype
def retired_rates_are_markov(spec: ModelSpec) -> bool:
    """
    Whether no rate out of a retired state depends on the time since
    retirement.
    """
    return not any(
        source.kind is StateKind.RETIRED_OBSERVED
        and intensity.duration_dependent
        for source, _, intensity in spec.intensities.pairs()
    )


@beartype
def transition_rates(
    spec: ModelSpec,
    t: float,
    *,
    retired_duration: float = 0.0,
    include_retired: bool = True,
) -> FloatArray:
    """
    The matrix of rates between extended states at time ``t``.

    Pre-retirement rates must be duration-free. Retired rates are evaluated
    at the time since retirement ``retired_duration``. With
    ``include_retired`` false, retired states are absorbing.
    """
    states = spec.states
    rates = np.zeros((states.extended_size, states.extended_size))
    for source, target, intensity in spec.intensities.pairs():
        if source.kind is StateKind.RETIRED_OBSERVED:
            if not include_retired:
                continue
            duration = retired_duration
        else:
            duration = 0.0
        rates[
            states.extended_position(state=source),
            states.extended_position(state=target),
        ] = float(intensity(t=t, u=duration))
    return rates


@beartype
def generator(rates: FloatArray) -> FloatArray:
    """
    The generator with off-diagonal ``rates`` and zero row sums.
    """
    off_diagonal = rates.copy()
    np.fill_diagonal(off_diagonal, 0.0)
    return off_diagonal - np.diag(off_diagonal.sum(axis=1))


@beartype
def retired_block_rates(
    spec: ModelSpec,
    t: FloatArray,
    duration: float,
) -> tuple[FloatArray, FloatArray]:
    """
    Rates within the retired block and from it to ``d``.

    ``t`` holds calendar times and ``duration`` is the common time since
    retirement. Returns moves of shape ``(len(t), sigma, sigma)`` with a
    zero diagonal and deaths of shape ``(len(t), sigma)``.
    """
    states = spec.states
    sigma = states.sigma
    moves = np.zeros((len(t), sigma, sigma))
    deaths = np.zeros((len(t), sigma))
    for source, target, intensity in spec.intensities.pairs():
        if source.kind is not StateKind.RETIRED_OBSERVED:
            continue
        values = intensity(t=t, u=duration)
        row = states.extended_position(state=source) - sigma
        if target.kind is StateKind.DEAD:
            deaths[:, row] = values
        else:
            column = states.extended_position(state=target) - sigma
            moves[:, row, column] = values
    return moves, deaths
