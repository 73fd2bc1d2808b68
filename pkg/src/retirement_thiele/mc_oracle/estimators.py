"""
Monte Carlo estimates of reserves, rates and occupation probabilities.

Reserves are sample means of discounted outflows over the paths in a
conditioning event. Forward rates are occurrences over exposure in a window
after ``t``; backward rates are the fraction of paths in a state at ``t``
which entered it in a window before ``t``, per unit of time.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from retirement_thiele.exceptions import EmptyConditioning
from retirement_thiele.mc_oracle.conditioning import (
    Bin,
    ConditioningSpec,
    RetiredWithHistory,
    in_state,
)
from retirement_thiele.mc_oracle.outflow import (
    PaymentIntegrals,
    discounted_outflows,
    payment_integrals,
)
from retirement_thiele.mc_oracle.paths import PathSet, check_time
from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import FloatArray
from retirement_thiele.model.payments import PaymentSpec
from retirement_thiele.model.states import StateId

LOGGER = logging.getLogger(__name__)

DEFAULT_MIN_EFFECTIVE = 200


@beartype
@dataclass(frozen=True)
class McEstimate:
    """
    A sample mean with its standard error.

    Attributes:
        n_effective: The number of paths in the conditioning event.
        bin_width: The widest bin or window of the event, a measure of the
            binning bias.
    """

    mean: float
    standard_error: float
    n_effective: int
    min_effective: int = DEFAULT_MIN_EFFECTIVE
    bin_width: float = 0.0

    @property
    def reliable(self) -> bool:
        """
        Whether enough paths were in the event.
        """
        return self.n_effective >= self.min_effective

    def z_score(self, value: float) -> float:
        """
        ``(mean - value) / standard_error``.

        A zero standard error gives zero for an exact match and an infinite
        score otherwise.
        """
        difference = self.mean - value
        if self.standard_error > 0:
            return difference / self.standard_error
        if difference == 0:
            return 0.0
        return float(np.copysign(np.inf, difference))


def _sample_estimate(
    values: FloatArray,
    *,
    min_effective: int,
    bin_width: float,
) -> McEstimate:
    """
    The mean of ``values`` with the standard error of the mean.
    """
    count = len(values)
    error = (
        float(np.std(values, ddof=1) / np.sqrt(count))
        if count > 1
        else float("nan")
    )
    return McEstimate(
        mean=float(np.mean(values)),
        standard_error=error,
        n_effective=count,
        min_effective=min_effective,
        bin_width=bin_width,
    )


def _require_paths(count: int, event: str) -> None:
    """
    Raise if no path is in an event.

    Raises:
        EmptyConditioning: ``count`` is zero.
    """
    if count == 0:
        msg = f"No path satisfies {event}."
        raise EmptyConditioning(msg)


@beartype
def estimate_reserve(
    paths: PathSet,
    cond: ConditioningSpec,
    payments: PaymentSpec,
    discount: DiscountCurve,
    *,
    integrals: PaymentIntegrals | None = None,
    min_effective: int = DEFAULT_MIN_EFFECTIVE,
) -> McEstimate:
    """
    The mean discounted outflow after ``cond.time`` over the paths in
    ``cond``.

    ``integrals`` tabulates the sojourn payments; it is built from
    ``payments`` and ``discount`` when not given.

    Raises:
        EmptyConditioning: No path is in ``cond``.
        OutOfHorizon: The conditioning time is outside of the contract.
    """
    chosen = cond.mask(paths=paths)
    _require_paths(count=int(chosen.sum()), event=repr(cond))
    if integrals is None:
        integrals = payment_integrals(payments=payments, discount=discount)
    outflows = discounted_outflows(
        paths=paths,
        integrals=integrals,
        t=cond.time,
    )
    estimate = _sample_estimate(
        values=outflows[chosen],
        min_effective=min_effective,
        bin_width=cond.bin_width,
    )
    if not estimate.reliable:
        LOGGER.warning(
            "Only %d paths satisfy %r.",
            estimate.n_effective,
            cond,
        )
    return estimate


@beartype
def pooled_mean(estimates: Sequence[McEstimate]) -> float:
    """
    The mean over the union of disjoint events, from the estimates on each.

    Raises:
        EmptyConditioning: No estimate has a path.
    """
    counts = np.array([estimate.n_effective for estimate in estimates])
    _require_paths(count=int(counts.sum()), event="any of the events")
    means = np.array([estimate.mean for estimate in estimates])
    return float(np.sum(counts * means) / counts.sum())


def _check_bandwidth(bandwidth: float) -> None:
    """
    Check that a window is positive.

    Raises:
        ValueError: ``bandwidth`` is not positive.
    """
    if not bandwidth > 0:
        msg = f"The bandwidth must be positive, got {bandwidth}."
        raise ValueError(msg)


@beartype
def estimate_forward_intensity(
    paths: PathSet,
    source: StateId,
    target: StateId,
    t: float,
    bandwidth: float,
    *,
    given: ConditioningSpec | None = None,
    min_effective: int = DEFAULT_MIN_EFFECTIVE,
) -> McEstimate:
    """
    The rate from ``source`` to ``target`` over ``(t, t + bandwidth]`` for
    paths in ``source`` at ``t`` which are in ``given``.

    The estimate is the number of jumps over the time spent in ``source`` in
    the window; its standard error is ``sqrt(jumps) / exposure``.

    Raises:
        ValueError: ``bandwidth`` is not positive.
        EmptyConditioning: No path is in the event or the paths in it spend
            no time in ``source``.
        OutOfHorizon: ``t`` is outside of the contract.
    """
    _check_bandwidth(bandwidth=bandwidth)
    check_time(t=t, horizon=paths.horizon)
    end = min(t + bandwidth, paths.horizon)
    chosen = in_state(
        paths=paths,
        positions=paths.state_at(t=t),
        state=source,
    )
    if given is not None:
        chosen &= given.mask(paths=paths)
    count = int(chosen.sum())
    event = f"state {source.label} at t={t}"
    _require_paths(count=count, event=event)
    path, start, stop, state = paths.sojourns
    staying = chosen[path] & in_state(
        paths=paths,
        positions=state,
        state=source,
    )
    exposure = float(
        np.sum(
            np.clip(stop[staying], t, end) - np.clip(start[staying], t, end),
        ),
    )
    if exposure <= 0:
        msg = f"The paths in {event} spend no time there."
        raise EmptyConditioning(msg)
    jumps = (
        chosen[paths.jump_path]
        & (paths.jump_time > t)
        & (paths.jump_time <= end)
        & in_state(paths=paths, positions=paths.jump_source, state=source)
        & in_state(paths=paths, positions=paths.jump_state, state=target)
    )
    occurrences = int(jumps.sum())
    return McEstimate(
        mean=occurrences / exposure,
        standard_error=float(np.sqrt(occurrences) / exposure),
        n_effective=count,
        min_effective=min_effective,
        bin_width=bandwidth,
    )


@beartype
def estimate_backward_intensity(
    paths: PathSet,
    source: StateId | None,
    target: StateId,
    t: float,
    bandwidth: float,
    *,
    min_effective: int = DEFAULT_MIN_EFFECTIVE,
) -> McEstimate:
    """
    The rate of having just entered ``target`` from ``source``, or from
    anywhere when ``source`` is ``None``, among paths in ``target`` at
    ``t``.

    The estimate is the fraction of those paths which entered ``target``
    in ``(t - bandwidth, t]``, divided by ``bandwidth``.

    Raises:
        ValueError: ``bandwidth`` is not positive or exceeds ``t``.
        EmptyConditioning: No path is in ``target`` at ``t``.
        OutOfHorizon: ``t`` is outside of the contract.
    """
    _check_bandwidth(bandwidth=bandwidth)
    check_time(t=t, horizon=paths.horizon)
    if bandwidth > t:
        msg = f"The bandwidth {bandwidth} exceeds t={t}."
        raise ValueError(msg)
    present = in_state(
        paths=paths,
        positions=paths.state_at(t=t),
        state=target,
    )
    count = int(present.sum())
    _require_paths(count=count, event=f"state {target.label} at t={t}")
    entries = (
        (paths.jump_time > t - bandwidth)
        & (paths.jump_time <= t)
        & in_state(paths=paths, positions=paths.jump_state, state=target)
        & ~in_state(paths=paths, positions=paths.jump_source, state=target)
    )
    if source is not None:
        entries &= in_state(
            paths=paths,
            positions=paths.jump_source,
            state=source,
        )
    entered = np.zeros(paths.n_paths, dtype=np.bool_)
    entered[paths.jump_path[entries]] = True
    fraction = float(np.mean(entered[present]))
    return McEstimate(
        mean=fraction / bandwidth,
        standard_error=float(
            np.sqrt(fraction * (1 - fraction) / count) / bandwidth,
        ),
        n_effective=count,
        min_effective=min_effective,
        bin_width=bandwidth,
    )


@beartype
@dataclass(frozen=True)
class RefinementCheck:
    """
    A retired reserve estimate and its refinements by the length of the
    last pre-retirement sojourn.

    Attributes:
        refined: One estimate per duration bin, ``None`` for empty bins.
        z_scores: ``(refined - coarse) / sqrt(se_refined**2 - se_coarse**2)``
            per bin, ``nan`` where it is undefined.
    """

    coarse: McEstimate
    refined: tuple[McEstimate | None, ...]
    z_scores: FloatArray

    def passes(self, threshold: float = 3.0) -> bool:
        """
        Whether every defined z-score is at most ``threshold`` in size.
        """
        defined = self.z_scores[np.isfinite(self.z_scores)]
        return bool(np.all(np.abs(defined) <= threshold))


@beartype
def history_refinement_check(
    paths: PathSet,
    cond: RetiredWithHistory,
    duration_bins: Sequence[Bin],
    payments: PaymentSpec,
    discount: DiscountCurve,
    *,
    integrals: PaymentIntegrals | None = None,
    min_effective: int = DEFAULT_MIN_EFFECTIVE,
) -> RefinementCheck:
    """
    Compare the reserve given the retirement time and the state retired
    from with its refinements by the pre-retirement duration.

    If the retired chain with its retirement time and state retired from
    is Markov, the refinements agree with the coarse estimate. The
    ``pre_duration`` of ``cond`` is not used.

    Raises:
        EmptyConditioning: No path is in ``cond``.
    """
    if integrals is None:
        integrals = payment_integrals(payments=payments, discount=discount)
    coarse_cond = RetiredWithHistory(
        time=cond.time,
        retirement=cond.retirement,
        retired_from=cond.retired_from,
    )
    coarse = estimate_reserve(
        paths=paths,
        cond=coarse_cond,
        payments=payments,
        discount=discount,
        integrals=integrals,
        min_effective=min_effective,
    )
    refined: list[McEstimate | None] = []
    scores = []
    for duration in duration_bins:
        try:
            estimate = estimate_reserve(
                paths=paths,
                cond=RetiredWithHistory(
                    time=cond.time,
                    retirement=cond.retirement,
                    retired_from=cond.retired_from,
                    pre_duration=duration,
                ),
                payments=payments,
                discount=discount,
                integrals=integrals,
                min_effective=min_effective,
            )
        except EmptyConditioning:
            refined.append(None)
            scores.append(np.nan)
            continue
        refined.append(estimate)
        variance = estimate.standard_error**2 - coarse.standard_error**2
        scores.append(
            (estimate.mean - coarse.mean) / np.sqrt(variance)
            if variance > 0
            else np.nan,
        )
    return RefinementCheck(
        coarse=coarse,
        refined=tuple(refined),
        z_scores=np.array(scores, dtype=np.float64),
    )


@beartype
def empirical_occupation(
    paths: PathSet,
    times: FloatArray,
) -> tuple[FloatArray, FloatArray]:
    """
    ``fractions[i, k]``: the fraction of paths in extended position ``k``
    at ``times[i]``, with binomial standard errors.
    """
    size = paths.states.extended_size
    fractions = np.stack(
        [
            np.bincount(paths.state_at(t=float(t)), minlength=size)
            / paths.n_paths
            for t in times
        ],
    )
    errors = np.sqrt(fractions * (1 - fractions) / paths.n_paths)
    return fractions, errors
