"""
Sampling paths of the extended chain by thinning.

Candidate event times come from a homogeneous Poisson process at the rate
bound of the model. A candidate at ``t`` is accepted with probability
``total rate / bound`` and the new state is drawn proportionally to the
rates. Paths are sampled in blocks of a fixed size; block ``b`` draws from
a Philox stream keyed by ``(seed, b)``, so the paths only depend on the
seed, the block size and the path index.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd
from beartype import beartype

from retirement_thiele.exceptions import (
    BadBound,
    NegativeIntensity,
    OutOfHorizon,
)
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import (
    DEAD,
    StateId,
    StateKind,
    StateSpace,
)
from retirement_thiele.thiele.export import write_csv

LOGGER = logging.getLogger(__name__)

IntArray = npt.NDArray[np.int64]
BoolArray = npt.NDArray[np.bool_]

DEFAULT_BLOCK_SIZE = 4096
_BOUND_TOLERANCE = 1e-12


@beartype
def check_time(t: float, horizon: float) -> None:
    """
    Check that ``t`` lies in the contract.

    Raises:
        OutOfHorizon: ``t`` is not in ``[0, horizon]``.
    """
    if not 0 <= t <= horizon:
        msg = f"The time {t} is not in [0, {horizon}]."
        raise OutOfHorizon(msg)


@beartype
@dataclass(frozen=True)
class PathSample:
    """
    One path: the initial extended state and the jumps after it.

    ``jumps`` holds ``(time, new extended state)`` pairs in time order.
    """

    states: StateSpace
    horizon: float
    initial: StateId
    jumps: tuple[tuple[float, StateId], ...]

    def state_at(self, t: float) -> StateId:
        """
        The extended state at ``t``, after any jump at ``t``.
        """
        state = self.initial
        for time, new_state in self.jumps:
            if time > t:
                break
            state = new_state
        return state

    @property
    def retirement_time(self) -> float:
        """
        The first time in the retired block, ``inf`` if there is none.
        """
        for time, state in self.jumps:
            if state.kind is StateKind.RETIRED_OBSERVED:
                return time
        return float("inf")

    @property
    def death_time(self) -> float:
        """
        The time of death, ``inf`` if the path survives the horizon.
        """
        for time, state in self.jumps:
            if state == DEAD:
                return time
        return float("inf")


@beartype
@dataclass(frozen=True)
class PathSet:
    """
    Sampled paths in columns.

    Jump records are sorted by path and, within a path, by time. States are
    extended positions.
    """

    states: StateSpace
    horizon: float
    initial: IntArray
    jump_path: IntArray
    jump_time: FloatArray
    jump_state: IntArray

    @property
    def n_paths(self) -> int:
        """
        The number of paths.
        """
        return len(self.initial)

    @cached_property
    def _first_of_path(self) -> BoolArray:
        """
        Whether each record is the first jump of its path.
        """
        first = np.ones(len(self.jump_path), dtype=np.bool_)
        first[1:] = self.jump_path[1:] != self.jump_path[:-1]
        return first

    @cached_property
    def jump_source(self) -> IntArray:
        """
        The extended position before each jump.
        """
        source = np.empty_like(self.jump_state)
        source[1:] = self.jump_state[:-1]
        first = self._first_of_path
        source[first] = self.initial[self.jump_path[first]]
        return source

    @cached_property
    def sojourn_start(self) -> FloatArray:
        """
        The time at which the state left by each jump was entered.
        """
        start = np.zeros_like(self.jump_time)
        start[1:] = self.jump_time[:-1]
        start[self._first_of_path] = 0.0
        return start

    @cached_property
    def _retirements(self) -> IntArray:
        """
        The records of entries into the retired block.
        """
        sigma = self.states.sigma
        return np.flatnonzero(
            (self.jump_source < sigma)
            & (self.jump_state >= sigma)
            & (self.jump_state < 2 * sigma),
        )

    @cached_property
    def retirement_time(self) -> FloatArray:
        """
        ``eta`` per path: the first time in the retired block or ``inf``.
        """
        eta = np.full(self.n_paths, fill_value=np.inf)
        records = self._retirements
        eta[self.jump_path[records]] = self.jump_time[records]
        return eta

    @cached_property
    def retired_from(self) -> IntArray:
        """
        ``H`` per path: the one-based state left on retirement, ``0`` if the
        path never retires.
        """
        history = np.zeros(self.n_paths, dtype=np.int64)
        records = self._retirements
        history[self.jump_path[records]] = self.jump_source[records] + 1
        return history

    @cached_property
    def pre_duration(self) -> FloatArray:
        """
        ``U^h`` per path: the length of the last pre-retirement sojourn,
        ``nan`` if the path never retires.
        """
        duration = np.full(self.n_paths, fill_value=np.nan)
        records = self._retirements
        duration[self.jump_path[records]] = (
            self.jump_time[records] - self.sojourn_start[records]
        )
        return duration

    @cached_property
    def death_time(self) -> FloatArray:
        """
        ``delta`` per path: the time of death or ``inf``.
        """
        delta = np.full(self.n_paths, fill_value=np.inf)
        records = np.flatnonzero(self.jump_state == self.states.dead_position)
        delta[self.jump_path[records]] = self.jump_time[records]
        return delta

    @cached_property
    def sojourns(
        self,
    ) -> tuple[IntArray, FloatArray, FloatArray, IntArray]:
        """
        Every sojourn as ``(path, start, end, extended position)``, the last
        sojourn of a path ending at the horizon.
        """
        count = self.n_paths
        path = np.concatenate([np.arange(count), self.jump_path])
        start = np.concatenate([np.zeros(count), self.jump_time])
        state = np.concatenate([self.initial, self.jump_state])
        order = np.lexsort((start, path))
        path, start, state = path[order], start[order], state[order]
        end = np.full(len(path), fill_value=self.horizon)
        same = path[1:] == path[:-1]
        end[:-1][same] = start[1:][same]
        return path, start, end, state

    def _last_jumps(self, t: float, *, inclusive: bool) -> IntArray:
        """
        Per path with a jump at or before ``t`` (strictly before unless
        ``inclusive``), the index of its last such record.
        """
        done = self.jump_time <= t if inclusive else self.jump_time < t
        records = np.flatnonzero(done)
        paths = self.jump_path[records]
        last = np.ones(len(records), dtype=np.bool_)
        last[:-1] = paths[1:] != paths[:-1]
        return records[last]

    def state_at(self, t: float) -> IntArray:
        """
        The extended position of every path at ``t``, after jumps at ``t``.
        """
        state = self.initial.copy()
        records = self._last_jumps(t=t, inclusive=True)
        state[self.jump_path[records]] = self.jump_state[records]
        return state

    def state_before(self, t: float) -> IntArray:
        """
        The extended position of every path just before ``t``.
        """
        state = self.initial.copy()
        records = self._last_jumps(t=t, inclusive=False)
        state[self.jump_path[records]] = self.jump_state[records]
        return state

    def entered_at(self, t: float) -> FloatArray:
        """
        The time at which every path entered its state at ``t``.
        """
        entered = np.zeros(self.n_paths)
        records = self._last_jumps(t=t, inclusive=True)
        entered[self.jump_path[records]] = self.jump_time[records]
        return entered

    def lumped(self, positions: IntArray) -> IntArray:
        """
        Lumped positions of extended positions.
        """
        return self.states.lump_positions[positions]

    def path(self, index: int) -> PathSample:
        """
        One path as a ``PathSample``.
        """
        extended = self.states.extended_states
        records = np.flatnonzero(self.jump_path == index)
        return PathSample(
            states=self.states,
            horizon=self.horizon,
            initial=extended[int(self.initial[index])],
            jumps=tuple(
                (float(self.jump_time[r]), extended[int(self.jump_state[r])])
                for r in records
            ),
        )

    def to_frame(self) -> pd.DataFrame:
        """
        Columns ``path_id, jump_time, new_state``.

        The initial state of every path is a row at time zero.
        """
        labels = np.array(
            [state.label for state in self.states.extended_states],
        )
        path_id = np.concatenate([np.arange(self.n_paths), self.jump_path])
        time = np.concatenate([np.zeros(self.n_paths), self.jump_time])
        state = np.concatenate([self.initial, self.jump_state])
        order = np.argsort(path_id, kind="stable")
        return pd.DataFrame(
            data={
                "path_id": path_id[order],
                "jump_time": time[order],
                "new_state": labels[state[order]],
            },
        )


@beartype
def path_set_of(samples: Sequence[PathSample]) -> PathSet:
    """
    Collect single paths of one model into a ``PathSet``.

    Raises:
        ValueError: There are no paths.
    """
    if not samples:
        msg = "At least one path is needed."
        raise ValueError(msg)
    states = samples[0].states
    jumps = [
        (index, time, states.extended_position(state=state))
        for index, sample in enumerate(samples)
        for time, state in sample.jumps
    ]
    return PathSet(
        states=states,
        horizon=samples[0].horizon,
        initial=np.array(
            [
                states.extended_position(state=sample.initial)
                for sample in samples
            ],
            dtype=np.int64,
        ),
        jump_path=np.array([j[0] for j in jumps], dtype=np.int64),
        jump_time=np.array([j[1] for j in jumps], dtype=np.float64),
        jump_state=np.array([j[2] for j in jumps], dtype=np.int64),
    )


def _generator(seed: int, block: int) -> np.random.Generator:
    """
    The random stream of one block.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(sequence))


def _rates(
    spec: ModelSpec,
    current: IntArray,
    t: FloatArray,
    entered: FloatArray,
    retired: FloatArray,
) -> FloatArray:
    """
    ``rates[m, k]``: the rate from the state of candidate ``m`` to ``k``.

    Retired rates get the time since retirement as their duration, other
    rates the time in the current state.

    Raises:
        NegativeIntensity: A rate is negative.
    """
    states = spec.states
    rates = np.zeros((len(current), states.extended_size))
    for source, target, intensity in spec.intensities.pairs():
        source_position = states.extended_position(state=source)
        chosen = np.flatnonzero(current == source_position)
        if chosen.size == 0:
            continue
        since = retired[chosen] if source.is_retired else entered[chosen]
        values = intensity(t=t[chosen], u=t[chosen] - since)
        if np.any(values < 0):
            msg = (
                f"The rate from {source.label} to {target.label} is "
                f"negative at t={float(t[chosen][np.argmin(values)])}."
            )
            raise NegativeIntensity(msg)
        rates[chosen, states.extended_position(state=target)] += values
    return rates


def _simulate_block(
    spec: ModelSpec,
    size: int,
    generator: np.random.Generator,
) -> PathSet:
    """
    Sample ``size`` paths with one random stream.

    Raises:
        BadBound: A total rate exceeds the bound of the model.
    """
    states = spec.states
    horizon = spec.horizon
    bound = spec.intensities.sup_bound
    position = generator.choice(
        states.extended_size,
        size=size,
        p=spec.initial_distribution(),
    ).astype(np.int64)
    initial = position.copy()
    time = np.zeros(size)
    entered = np.zeros(size)
    retired = np.full(size, fill_value=np.inf)
    records: list[tuple[IntArray, FloatArray, IntArray]] = []
    active = np.flatnonzero(position != states.dead_position)
    while active.size:
        time[active] += generator.exponential(
            scale=1 / bound,
            size=active.size,
        )
        active = active[time[active] <= horizon]
        if active.size == 0:
            break
        t = time[active]
        rates = _rates(
            spec=spec,
            current=position[active],
            t=t,
            entered=entered[active],
            retired=retired[active],
        )
        total = rates.sum(axis=1)
        if np.any(total > bound * (1 + _BOUND_TOLERANCE)):
            worst = int(np.argmax(total))
            msg = (
                f"The total rate {float(total[worst])} at "
                f"t={float(t[worst])} exceeds the bound {bound}."
            )
            raise BadBound(msg)
        uniforms = generator.random(size=(active.size, 2))
        accepted = np.flatnonzero(uniforms[:, 0] * bound < total)
        if accepted.size:
            threshold = uniforms[accepted, 1] * total[accepted]
            cumulative = np.cumsum(rates[accepted], axis=1)
            target = np.minimum(
                (cumulative <= threshold[:, None]).sum(axis=1),
                states.extended_size - 1,
            ).astype(np.int64)
            jumped = active[accepted]
            retiring = (
                (target >= states.sigma)
                & (target < 2 * states.sigma)
                & ~np.isfinite(retired[jumped])
            )
            retired[jumped[retiring]] = time[jumped[retiring]]
            position[jumped] = target
            entered[jumped] = time[jumped]
            records.append((jumped, time[jumped].copy(), target))
        active = active[position[active] != states.dead_position]
    if records:
        paths = np.concatenate([r[0] for r in records])
        times = np.concatenate([r[1] for r in records])
        targets = np.concatenate([r[2] for r in records])
    else:
        paths = np.zeros(0, dtype=np.int64)
        times = np.zeros(0)
        targets = np.zeros(0, dtype=np.int64)
    order = np.argsort(paths, kind="stable")
    return PathSet(
        states=states,
        horizon=horizon,
        initial=initial,
        jump_path=paths[order],
        jump_time=times[order],
        jump_state=targets[order],
    )


@beartype
def simulate_paths(
    spec: ModelSpec,
    n_paths: int,
    seed: int,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
    workers: int | None = None,
) -> PathSet:
    """
    Sample ``n_paths`` paths of the extended chain of ``spec``.

    Blocks run on ``workers`` threads; the result does not depend on the
    number of workers.

    Raises:
        ValueError: ``n_paths`` or ``block_size`` is not positive.
        BadBound: A total rate exceeds the bound of the model.
        NegativeIntensity: A sampled rate is negative.
    """
    if n_paths < 1 or block_size < 1:
        msg = (
            "The number of paths and the block size must be positive, got "
            f"{n_paths} and {block_size}."
        )
        raise ValueError(msg)
    sizes = [
        min(block_size, n_paths - start)
        for start in range(0, n_paths, block_size)
    ]
    LOGGER.info(
        "Sampling %d paths in %d blocks on %s workers.",
        n_paths,
        len(sizes),
        workers or "default",
    )

    def run(block: int) -> PathSet:
        """
        Sample one block.
        """
        return _simulate_block(
            spec=spec,
            size=sizes[block],
            generator=_generator(seed=seed, block=block),
        )

    with ThreadPoolExecutor(max_workers=workers) as executor:
        blocks = list(executor.map(run, range(len(sizes))))
    offsets = np.cumsum([0, *sizes[:-1]])
    return PathSet(
        states=spec.states,
        horizon=spec.horizon,
        initial=np.concatenate([block.initial for block in blocks]),
        jump_path=np.concatenate(
            [
                block.jump_path + offset
                for block, offset in zip(blocks, offsets, strict=True)
            ],
        ),
        jump_time=np.concatenate([block.jump_time for block in blocks]),
        jump_state=np.concatenate([block.jump_state for block in blocks]),
    )


@beartype
def dump_paths(paths: PathSet, path: Path) -> Path:
    """
    Write every path as CSV rows ``path_id, jump_time, new_state``.
    """
    LOGGER.info("Dumping %d paths to %s.", paths.n_paths, path)
    return write_csv(frame=paths.to_frame(), path=path)
