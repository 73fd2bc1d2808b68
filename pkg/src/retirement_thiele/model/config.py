"""
Read models from JSON files.
"""

import json
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from beartype import beartype

from retirement_thiele.exceptions import ModelFileError
from retirement_thiele.model.discount import DiscountCurve
from retirement_thiele.model.functions import (
    Constant,
    GompertzMakeham,
    LinearTable,
    PiecewiseLinear,
    TimeFunction,
    Windowed,
)
from retirement_thiele.model.intensities import (
    Intensity,
    IntensitySpec,
    scanned_intensity_spec,
)
from retirement_thiele.model.payments import DiscretePayment, PaymentSpec
from retirement_thiele.model.spec import ModelSpec
from retirement_thiele.model.states import StateId, StateSpace

LOGGER = logging.getLogger(__name__)

_NO_DISCOUNT = {"kind": "constant_rate", "params": {"rate": 0.0}}


@beartype
def function_from_config(kind: str, params: Mapping[str, Any]) -> TimeFunction:
    """
    Build a function of one argument from its kind and parameters.

    Kinds are ``constant``, ``gompertz``, ``piecewise_linear`` and
    ``table``.
    """
    if kind == "constant":
        return Constant(value=float(params["value"]))
    if kind == "gompertz":
        return GompertzMakeham(
            a=float(params.get("a", 0.0)),
            b=float(params["b"]),
            c=float(params["c"]),
            age=float(params.get("age", 0.0)),
        )
    if kind == "piecewise_linear":
        return PiecewiseLinear(
            knots=tuple(float(knot) for knot in params["knots"]),
            values=tuple(float(value) for value in params["values"]),
        )
    if kind == "table":
        return LinearTable(
            points=tuple((float(x), float(y)) for x, y in params["points"]),
        )
    msg = f"Unknown function kind {kind!r}."
    raise ValueError(msg)


def _payment_function(entry: Mapping[str, Any]) -> TimeFunction:
    """
    A payment function with an optional ``[start, end)`` window.
    """
    function = function_from_config(
        kind=entry["kind"],
        params=entry.get("params", {}),
    )
    if "start" in entry or "end" in entry:
        return Windowed(
            inner=function,
            start=float(entry.get("start", 0.0)),
            end=float(entry.get("end", float("inf"))),
        )
    return function


def _discount(entry: Mapping[str, Any]) -> DiscountCurve:
    """
    Build the discount curve.
    """
    kind = entry["kind"]
    params = entry.get("params", {})
    if kind == "constant_rate":
        return DiscountCurve.constant_rate(rate=float(params["rate"]))
    if kind == "table":
        return DiscountCurve.from_short_rates(
            points=tuple((float(x), float(y)) for x, y in params["points"]),
        )
    msg = f"Unknown discount kind {kind!r}."
    raise ValueError(msg)


def _payments(
    entry: Mapping[str, Any],
    *,
    states: StateSpace,
    horizon: float,
) -> PaymentSpec:
    """
    Build the payments on lumped states.
    """
    sojourn: dict[StateId, TimeFunction] = {}
    for item in entry.get("sojourn", []):
        state = states.parse_lumped(label=str(item["state"]))
        sojourn[state] = _payment_function(entry=item)
    transition: dict[tuple[StateId, StateId], TimeFunction] = {}
    for item in entry.get("transition", []):
        pair = (
            states.parse_lumped(label=str(item["from"])),
            states.parse_lumped(label=str(item["to"])),
        )
        transition[pair] = _payment_function(entry=item)
    discrete = tuple(
        DiscretePayment(
            time=float(item["time"]),
            state=states.parse_lumped(label=str(item["state"])),
            amount=float(item["amount"]),
        )
        for item in entry.get("discrete", [])
    )
    return PaymentSpec(
        horizon=horizon,
        sojourn=sojourn,
        transition=transition,
        discrete=discrete,
    )


@beartype
def model_from_mapping(data: Mapping[str, Any]) -> ModelSpec:
    """
    Build a model from parsed JSON.

    When ``sup_bound`` is missing, it is the largest total rate found on a
    grid scan times a safety factor.

    Raises:
        ModelFileError: A field is missing or has an invalid value.
    """
    try:
        states = StateSpace(sigma=int(data["sigma"]))
        horizon = float(data["horizon"])
        rates = {
            (
                states.parse_extended(label=str(item["from"])),
                states.parse_extended(label=str(item["to"])),
            ): Intensity(
                function=function_from_config(
                    kind=item["kind"],
                    params=item.get("params", {}),
                ),
                duration_dependent=bool(item.get("duration_dependent", False)),
            )
            for item in data.get("intensities", [])
        }
        if "sup_bound" in data:
            intensities = IntensitySpec(
                states=states,
                rates=rates,
                sup_bound=float(data["sup_bound"]),
            )
        else:
            intensities = scanned_intensity_spec(
                states=states,
                rates=rates,
                horizon=horizon,
            )
            LOGGER.debug(
                "Derived sup_bound %.6g from a grid scan.",
                intensities.sup_bound,
            )
        initial = data.get("initial")
        return ModelSpec(
            states=states,
            intensities=intensities,
            payments=_payments(
                entry=data.get("payments", {}),
                states=states,
                horizon=horizon,
            ),
            discount=_discount(entry=data.get("discount", _NO_DISCOUNT)),
            initial=None
            if initial is None
            else tuple(float(value) for value in initial),
        )
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"Invalid model: {exc}"
        raise ModelFileError(msg) from exc


@beartype
def load_model(path: Path) -> ModelSpec:
    """
    Read a model from a JSON file.

    Raises:
        ModelFileError: The file cannot be read or is not a valid model.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        msg = f"Cannot read model file {path}: {exc}"
        raise ModelFileError(msg) from exc
    if not isinstance(data, dict):
        msg = f"The model file {path} must hold a JSON object."
        raise ModelFileError(msg)
    return model_from_mapping(data=data)
