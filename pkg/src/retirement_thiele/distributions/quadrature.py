"""
Trapezoidal rules on the lower triangle of a grid.
"""

import numpy as np
from beartype import beartype

from retirement_thiele.model.functions import FloatArray


@beartype
def triangle_trapezoid(values: FloatArray, step: float) -> FloatArray:
    """
    Integrate each row ``values[i, :i + 1]`` by the trapezoidal rule.

    ``values`` has shape ``(count, count, ...)``; the result has shape
    ``(count, ...)`` and is zero in row zero.
    """
    count = values.shape[0]
    index = np.arange(count)
    inside = index[None, :] <= index[:, None]
    inside = inside.reshape(inside.shape + (1,) * (values.ndim - 2))
    total = np.where(inside, values, 0.0).sum(axis=1)
    ends = (values[:, 0] + values[index, index]) / 2
    return step * (total - ends)
