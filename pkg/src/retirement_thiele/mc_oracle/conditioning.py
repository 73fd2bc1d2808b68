"""
Events at a time ``t`` which sampled paths are conditioned on.

Each event selects the paths satisfying it. The state at ``t`` is the state
after any jump at ``t``.
"""

from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.mc_oracle.paths import (
    BoolArray,
    IntArray,
    PathSet,
    check_time,
)
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.states import RETIRED, StateId, StateKind


@beartype
@dataclass(frozen=True)
class Bin:
    """
    The interval ``[lower, upper)``.
    """

    lower: float
    upper: float

    def __post_init__(self) -> None:
        """
        Check that the bin has a positive width.
        """
        if not self.upper > self.lower:
            msg = (
                f"A bin needs a positive width, got [{self.lower}, "
                f"{self.upper})."
            )
            raise ValueError(msg)

    @property
    def width(self) -> float:
        """
        ``upper - lower``.
        """
        return self.upper - self.lower

    def contains(self, values: FloatArray) -> BoolArray:
        """
        Whether each value lies in the bin.
        """
        return (values >= self.lower) & (values < self.upper)


@beartype
def in_state(
    paths: PathSet,
    positions: IntArray,
    state: StateId,
) -> BoolArray:
    """
    Whether extended ``positions`` are ``state``.

    Observed retired states are compared in the extended chain, every other
    state in the lumped chain.
    """
    states = paths.states
    if state.kind is StateKind.RETIRED_OBSERVED:
        return positions == states.extended_position(state=state)
    return paths.lumped(positions=positions) == states.lumped_position(
        state=state,
    )


@beartype
@dataclass(frozen=True)
class InState:
    """
    ``Z_t = state``, and the current sojourn started in ``entered`` if
    given.
    """

    time: float
    state: StateId
    entered: Bin | None = None

    @property
    def bin_width(self) -> float:
        """
        The widest bin of the event.
        """
        return 0.0 if self.entered is None else self.entered.width

    def mask(self, paths: PathSet) -> BoolArray:
        """
        The paths in the event.
        """
        check_time(t=self.time, horizon=paths.horizon)
        chosen = in_state(
            paths=paths,
            positions=paths.state_at(t=self.time),
            state=self.state,
        )
        if self.entered is not None:
            chosen &= self.entered.contains(
                values=paths.entered_at(t=self.time),
            )
        return chosen


@beartype
@dataclass(frozen=True)
class RetiredIn:
    """
    ``Z_t = p`` with the retirement time in ``retirement``.
    """

    time: float
    retirement: Bin

    @property
    def bin_width(self) -> float:
        """
        The width of the retirement bin.
        """
        return self.retirement.width

    def mask(self, paths: PathSet) -> BoolArray:
        """
        The paths in the event.
        """
        check_time(t=self.time, horizon=paths.horizon)
        retired = in_state(
            paths=paths,
            positions=paths.state_at(t=self.time),
            state=RETIRED,
        )
        return retired & self.retirement.contains(
            values=paths.retirement_time,
        )


@beartype
@dataclass(frozen=True)
class RetiredWithHistory:
    """
    ``Z_t = p`` with the retirement time in ``retirement``, retired from the
    one-based pre-retirement state ``retired_from`` after a last
    pre-retirement sojourn of a length in ``pre_duration`` if given.
    """

    time: float
    retirement: Bin
    retired_from: int
    pre_duration: Bin | None = None

    @property
    def bin_width(self) -> float:
        """
        The widest bin of the event.
        """
        if self.pre_duration is None:
            return self.retirement.width
        return max(self.retirement.width, self.pre_duration.width)

    def mask(self, paths: PathSet) -> BoolArray:
        """
        The paths in the event.
        """
        chosen = RetiredIn(time=self.time, retirement=self.retirement).mask(
            paths=paths,
        )
        chosen &= paths.retired_from == self.retired_from
        if self.pre_duration is not None:
            chosen &= self.pre_duration.contains(values=paths.pre_duration)
        return chosen


@beartype
@dataclass(frozen=True)
class JustEntered:
    """
    A jump from ``source`` to ``target`` in ``(t - window, t]`` with the
    path still in ``target`` at ``t``.

    This stands for ``Z_{t-} = source, Z_t = target``.
    """

    time: float
    source: StateId
    target: StateId
    window: float

    def __post_init__(self) -> None:
        """
        Check that the window is positive.
        """
        if not self.window > 0:
            msg = f"The window must be positive, got {self.window}."
            raise ValueError(msg)

    @property
    def bin_width(self) -> float:
        """
        The length of the window.
        """
        return self.window

    def mask(self, paths: PathSet) -> BoolArray:
        """
        The paths in the event.
        """
        check_time(t=self.time, horizon=paths.horizon)
        inside = (paths.jump_time > self.time - self.window) & (
            paths.jump_time <= self.time
        )
        jumped = (
            inside
            & in_state(
                paths=paths,
                positions=paths.jump_source,
                state=self.source,
            )
            & in_state(
                paths=paths,
                positions=paths.jump_state,
                state=self.target,
            )
        )
        chosen = np.zeros(paths.n_paths, dtype=np.bool_)
        chosen[paths.jump_path[jumped]] = True
        return chosen & in_state(
            paths=paths,
            positions=paths.state_at(t=self.time),
            state=self.target,
        )


ConditioningSpec = InState | RetiredIn | RetiredWithHistory | JustEntered
