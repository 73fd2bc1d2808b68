"""
Tests for the extended and lumped state spaces.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from retirement_thiele.model.states import (
    DEAD,
    RETIRED,
    StateId,
    StateKind,
    StateSpace,
    lump_state,
    pre_retirement,
    retired_observed,
)


def test_positions() -> None:
    """
    Extended positions hold states ``1..2 sigma`` then ``d``; lumped
    positions hold ``1..sigma``, ``p`` and ``d``.
    """
    states = StateSpace(sigma=2)
    assert [state.label for state in states.extended_states] == [
        "1",
        "2",
        "3",
        "4",
        "d",
    ]
    assert [state.label for state in states.lumped_states] == [
        "1",
        "2",
        "p",
        "d",
    ]
    np.testing.assert_array_equal(states.lump_positions, [0, 1, 2, 2, 3])
    assert states.dead_position == 4
    assert states.lumped_position(state=RETIRED) == 2


def test_lump_state() -> None:
    """
    Retired health states lump to ``p``; other states are kept.
    """
    assert lump_state(state=retired_observed(index=3)) == RETIRED
    assert lump_state(state=pre_retirement(index=1)) == pre_retirement(
        index=1,
    )
    assert lump_state(state=DEAD) == DEAD


@given(sigma=st.integers(min_value=1, max_value=6), data=st.data())
def test_lump_positions_follow_states(sigma: int, data: st.DataObject) -> None:
    """
    The lumped position of each extended position is the position of its
    lumped state.
    """
    states = StateSpace(sigma=sigma)
    position = data.draw(
        st.integers(min_value=0, max_value=states.extended_size - 1),
    )
    state = states.extended_states[position]
    assert states.lump_positions[position] == states.lumped_position(
        state=lump_state(state=state),
    )

def test_retired_of() -> None:
    """
    The retired state with the health of pre-retirement state ``k`` is
    ``sigma + k``.
    """
    states = StateSpace(sigma=3)
    assert states.retired_of(pre_state=2) == retired_observed(index=5)


@pytest.mark.parametrize(
    argnames=("label", "expected"),
    argvalues=[
        ("1", pre_retirement(index=1)),
        ("3", retired_observed(index=3)),
        ("d", DEAD),
    ],
)
def test_parse_extended(label: str, expected: StateId) -> None:
    """
    Extended labels are parsed to states.
    """
    assert StateSpace(sigma=2).parse_extended(label=label) == expected


@pytest.mark.parametrize(argnames="label", argvalues=["0", "5", "x", "p"])
def test_parse_extended_unknown(label: str) -> None:
    """
    Labels outside of the extended alphabet are rejected.
    """
    with pytest.raises(expected_exception=ValueError):
        StateSpace(sigma=2).parse_extended(label=label)


def test_parse_lumped() -> None:
    """
    ``p`` is a lumped label; retired health states are not.
    """
    states = StateSpace(sigma=2)
    assert states.parse_lumped(label="p") == RETIRED
    with pytest.raises(expected_exception=ValueError):
        states.parse_lumped(label="3")


def test_forbidden() -> None:
    """
    Self-transitions, leaving ``d`` and returning from retirement are
    forbidden.
    """
    states = StateSpace(sigma=2)
    active = pre_retirement(index=1)
    retired = retired_observed(index=3)
    assert states.is_forbidden(source=active, target=active)
    assert states.is_forbidden(source=DEAD, target=active)
    assert states.is_forbidden(source=retired, target=active)
    assert not states.is_forbidden(source=active, target=retired)
    assert not states.is_forbidden(
        source=retired,
        target=retired_observed(index=4),
    )


def test_index_matches_kind() -> None:
    """
    Numbered states need an index, ``p`` and ``d`` must not have one.
    """
    with pytest.raises(expected_exception=ValueError):
        StateId(kind=StateKind.PRE_RETIREMENT)
    with pytest.raises(expected_exception=ValueError):
        StateId(kind=StateKind.DEAD, index=1)


def test_no_pre_retirement_states() -> None:
    """
    A state space needs a pre-retirement state.
    """
    with pytest.raises(expected_exception=ValueError):
        StateSpace(sigma=0)


def test_p_is_not_extended() -> None:
    """
    ``p`` has no extended position.
    """
    with pytest.raises(expected_exception=ValueError):
        StateSpace(sigma=1).extended_position(state=RETIRED)
