"""
States of the extended and of the lumped retirement chain.

With ``sigma`` health states before retirement, the extended chain has states
``1..2*sigma`` and ``d``: ``1..sigma`` are pre-retirement health states,
``sigma+1..2*sigma`` are the same health states after retirement and ``d`` is
death. The lumped chain merges all retired health states into ``p``.

Positions are zero-based: extended position ``i`` holds state ``i + 1`` for
``i < 2 * sigma`` and position ``2 * sigma`` holds ``d``. Lumped position
``sigma`` holds ``p`` and ``sigma + 1`` holds ``d``.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import numpy.typing as npt
from beartype import beartype


class StateKind(Enum):
    """
    The kind of a state.
    """

    PRE_RETIREMENT = "pre_retirement"
    RETIRED_OBSERVED = "retired_observed"
    RETIRED_LUMPED = "retired_lumped"
    DEAD = "dead"


@beartype
@dataclass(frozen=True)
class StateId:
    """
    A state of either chain.

    ``index`` is the one-based state number for pre-retirement and observed
    retired states and ``0`` for ``p`` and ``d``.
    """

    kind: StateKind
    index: int = 0

    def __post_init__(self) -> None:
        """
        Check that the index matches the kind.
        """
        numbered = self.kind in {
            StateKind.PRE_RETIREMENT,
            StateKind.RETIRED_OBSERVED,
        }
        if numbered and self.index < 1:
            msg = f"A {self.kind.value} state needs an index of at least 1."
            raise ValueError(msg)
        if not numbered and self.index != 0:
            msg = f"A {self.kind.value} state has no index."
            raise ValueError(msg)

    @property
    def label(self) -> str:
        """
        The label used in model files and tables.
        """
        if self.kind is StateKind.RETIRED_LUMPED:
            return "p"
        if self.kind is StateKind.DEAD:
            return "d"
        return str(self.index)

    @property
    def is_retired(self) -> bool:
        """
        Whether this is an observed or lumped retired state.
        """
        return self.kind in {
            StateKind.RETIRED_OBSERVED,
            StateKind.RETIRED_LUMPED,
        }


RETIRED = StateId(kind=StateKind.RETIRED_LUMPED)
DEAD = StateId(kind=StateKind.DEAD)


@beartype
def pre_retirement(index: int) -> StateId:
    """
    The pre-retirement state with the given one-based index.
    """
    return StateId(kind=StateKind.PRE_RETIREMENT, index=index)


@beartype
def retired_observed(index: int) -> StateId:
    """
    The observed retired state with the given one-based extended index.
    """
    return StateId(kind=StateKind.RETIRED_OBSERVED, index=index)


@beartype
def lump_state(state: StateId) -> StateId:
    """
    Map a state of the extended chain to the lumped chain.

    Pre-retirement states and ``d`` are kept, observed retired states become
    ``p``.
    """
    if state.kind is StateKind.RETIRED_OBSERVED:
        return RETIRED
    return state


@beartype
@dataclass(frozen=True)
class StateSpace:
    """
    The state spaces of a model with ``sigma`` pre-retirement states.
    """

    sigma: int

    def __post_init__(self) -> None:
        """
        Check that there is at least one pre-retirement state.
        """
        if self.sigma < 1:
            msg = f"sigma must be at least 1, got {self.sigma}."
            raise ValueError(msg)

    @property
    def extended_size(self) -> int:
        """
        The number of extended states, ``d`` included.
        """
        return 2 * self.sigma + 1

    @property
    def lumped_size(self) -> int:
        """
        The number of lumped states, ``p`` and ``d`` included.
        """
        return self.sigma + 2

    @property
    def dead_position(self) -> int:
        """
        The extended position of ``d``.
        """
        return 2 * self.sigma

    @cached_property
    def extended_states(self) -> tuple[StateId, ...]:
        """
        All extended states in position order.
        """
        pre = [pre_retirement(index=i) for i in range(1, self.sigma + 1)]
        retired = [
            retired_observed(index=i)
            for i in range(self.sigma + 1, 2 * self.sigma + 1)
        ]
        return (*pre, *retired, DEAD)

    @cached_property
    def lumped_states(self) -> tuple[StateId, ...]:
        """
        All lumped states in position order.
        """
        pre = [pre_retirement(index=i) for i in range(1, self.sigma + 1)]
        return (*pre, RETIRED, DEAD)

    @cached_property
    def lump_positions(self) -> npt.NDArray[np.int64]:
        """
        For every extended position, the lumped position of its image.
        """
        return np.array(
            [
                self.lumped_position(state=lump_state(state=state))
                for state in self.extended_states
            ],
            dtype=np.int64,
        )

    def check(self, state: StateId) -> None:
        """
        Raise ``ValueError`` if a numbered state is out of range.
        """
        pre_out_of_range = (
            state.kind is StateKind.PRE_RETIREMENT and state.index > self.sigma
        )
        retired_out_of_range = (
            state.kind is StateKind.RETIRED_OBSERVED
            and not self.sigma < state.index <= 2 * self.sigma
        )
        if pre_out_of_range or retired_out_of_range:
            msg = (
                f"State {state.label} does not exist "
                f"when sigma is {self.sigma}."
            )
            raise ValueError(msg)

    def extended_position(self, state: StateId) -> int:
        """
        The position of an extended state.
        """
        self.check(state=state)
        if state.kind is StateKind.DEAD:
            return self.dead_position
        if state.kind is StateKind.RETIRED_LUMPED:
            msg = "p is not a state of the extended chain."
            raise ValueError(msg)
        return state.index - 1

    def lumped_position(self, state: StateId) -> int:
        """
        The position of a lumped state.
        """
        self.check(state=state)
        if state.kind is StateKind.DEAD:
            return self.sigma + 1
        if state.kind is StateKind.RETIRED_LUMPED:
            return self.sigma
        if state.kind is StateKind.RETIRED_OBSERVED:
            msg = f"{state.label} is not a state of the lumped chain."
            raise ValueError(msg)
        return state.index - 1

    def retired_of(self, pre_state: int) -> StateId:
        """
        The observed retired state with the health of a pre-retirement state.

        ``pre_state`` is the one-based pre-retirement index.
        """
        return retired_observed(index=self.sigma + pre_state)

    def parse_extended(self, label: str) -> StateId:
        """
        Parse a label of the extended alphabet ``1..2*sigma, d``.
        """
        if label == "d":
            return DEAD
        state = self._parse_number(label=label)
        if state > 2 * self.sigma:
            msg = f"Unknown extended state {label!r}."
            raise ValueError(msg)
        if state > self.sigma:
            return retired_observed(index=state)
        return pre_retirement(index=state)

    def parse_lumped(self, label: str) -> StateId:
        """
        Parse a label of the lumped alphabet ``1..sigma, p, d``.
        """
        if label == "d":
            return DEAD
        if label == "p":
            return RETIRED
        state = self._parse_number(label=label)
        if state > self.sigma:
            msg = f"Unknown lumped state {label!r}."
            raise ValueError(msg)
        return pre_retirement(index=state)

    @staticmethod
    def _parse_number(label: str) -> int:
        """
        Parse a positive state number.
        """
        if not label.isdigit() or int(label) < 1:
            msg = f"Unknown state {label!r}."
            raise ValueError(msg)
        return int(label)

    def is_forbidden(self, source: StateId, target: StateId) -> bool:
        """
        Whether a transition between extended states is structurally zero.

        Nothing leaves ``d``, retired states never return to pre-retirement
        states and no state jumps to itself.
        """
        return (
            source == target
            or source.kind is StateKind.DEAD
            or (
                source.kind is StateKind.RETIRED_OBSERVED
                and target.kind is StateKind.PRE_RETIREMENT
            )
        )
