"""
Reserve curves and surfaces on a time grid.

Triangular domains are stored as square arrays with ``nan`` outside the
triangle: an entry ``[i, j]`` exists only for ``j <= i``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd
from beartype import beartype

from retirement_thiele.distributions.grid import TimeGrid
from retirement_thiele.model.functions import FloatArray


class Regime(Enum):
    """
    The information an insurer uses to set a reserve.
    """

    FULL = "full"
    G1 = "G1"
    G2 = "G2"
    PRACTICE = "practice"
    EXTENDED = "extended"


def _triangle_frame(
    grid: TimeGrid,
    values: FloatArray,
    column: str,
) -> pd.DataFrame:
    """
    Rows ``(t, column, value)`` over the triangle, row-major.
    """
    nodes = grid.nodes
    rows, columns = np.tril_indices(len(nodes))
    return pd.DataFrame(
        data={
            "t": nodes[rows],
            column: nodes[columns],
            "value": values[rows, columns],
        },
    )


@beartype
@dataclass(frozen=True)
class Curve:
    """
    A reserve depending on time only.
    """

    grid: TimeGrid
    values: FloatArray
    regime: Regime
    label: str

    def at(self, t: float) -> float:
        """
        The value at the node ``t``.
        """
        return float(self.values[self.grid.index_of(t=t)])

    def to_frame(self) -> pd.DataFrame:
        """
        Columns ``t, value``.
        """
        return pd.DataFrame(data={"t": self.grid.nodes, "value": self.values})


@beartype
@dataclass(frozen=True)
class CurveR:
    """
    A retired reserve ``values[i, j]`` at ``t_i`` given retirement at ``r_j``.
    """

    grid: TimeGrid
    values: FloatArray
    regime: Regime
    label: str

    def at(self, t: float, r: float) -> float:
        """
        The value at the nodes ``t`` and ``r``.
        """
        return float(
            self.values[self.grid.index_of(t=t), self.grid.index_of(t=r)],
        )

    def diagonal(self) -> FloatArray:
        """
        The reserve just after retirement, ``values[i, i]``.
        """
        return np.diagonal(self.values).copy()

    def to_frame(self) -> pd.DataFrame:
        """
        Columns ``t, r, value``.
        """
        return _triangle_frame(grid=self.grid, values=self.values, column="r")


@beartype
@dataclass(frozen=True)
class CurveS:
    """
    A pre-retirement reserve ``values[i, j]`` at ``t_i`` for someone who
    entered the current state at ``s_j``.
    """

    grid: TimeGrid
    values: FloatArray
    regime: Regime
    label: str

    def at(self, t: float, s: float) -> float:
        """
        The value at the nodes ``t`` and ``s``.
        """
        return float(
            self.values[self.grid.index_of(t=t), self.grid.index_of(t=s)],
        )

    def diagonal(self) -> FloatArray:
        """
        The reserve just after entering the state, ``values[i, i]``.
        """
        return np.diagonal(self.values).copy()

    def spread_in_s(self) -> float:
        """
        The largest difference between values at the same time.
        """
        largest = np.nanmax(self.values, axis=1)
        return float(np.max(largest - np.nanmin(self.values, axis=1)))

    def to_frame(self) -> pd.DataFrame:
        """
        Columns ``t, s, value``.
        """
        return _triangle_frame(grid=self.grid, values=self.values, column="s")


@beartype
@dataclass(frozen=True)
class Surface4:
    """
    The full-information retired reserve ``values[i, s, j, k]``.

    The reserve is at ``t_i`` given retirement at ``r_j`` from
    pre-retirement state ``k + 1`` after a last pre-retirement sojourn that
    started at ``s``. The ``s`` axis has length one when the reserve does
    not depend on it.
    """

    grid: TimeGrid
    values: FloatArray
    regime: Regime
    label: str

    @property
    def s_collapsed(self) -> bool:
        """
        Whether the reserve is stored independently of ``s``.
        """
        return self.values.shape[1] == 1

    def at(
        self,
        t: float,
        r: float,
        k: int,
        s: float | None = None,
    ) -> float:
        """
        The value at the nodes ``t``, ``r`` and the one-based state ``k``.
        """
        s_index = 0
        if s is not None and not self.s_collapsed:
            s_index = self.grid.index_of(t=s)
        return float(
            self.values[
                self.grid.index_of(t=t),
                s_index,
                self.grid.index_of(t=r),
                k - 1,
            ],
        )

    def by_state(self, k: int) -> CurveR:
        """
        The reserve after retirement from the one-based state ``k`` for the
        first stored ``s``.
        """
        return CurveR(
            grid=self.grid,
            values=self.values[:, 0, :, k - 1],
            regime=self.regime,
            label=f"{self.label}|H={k}",
        )

    def just_retired(self, k: int) -> FloatArray:
        """
        The reserve at ``t_i`` of someone retiring at ``t_i`` from ``k``.
        """
        return self.by_state(k=k).diagonal()

    def to_frame(self) -> pd.DataFrame:
        """
        Columns ``t, r, k, value``, with ``s`` before ``r`` unless collapsed.
        """
        frames = []
        for k in range(1, self.values.shape[3] + 1):
            for s_index in range(self.values.shape[1]):
                frame = _triangle_frame(
                    grid=self.grid,
                    values=self.values[:, s_index, :, k - 1],
                    column="r",
                )
                frame.insert(loc=2, column="k", value=k)
                if not self.s_collapsed:
                    frame.insert(
                        loc=1,
                        column="s",
                        value=self.grid.nodes[s_index],
                    )
                frames.append(frame)
        return pd.concat(objs=frames, ignore_index=True)


ReserveSurface = Curve | CurveR | CurveS | Surface4


@beartype
@dataclass(frozen=True)
class SumAtRisk:
    """
    Sums at risk of a solved reserve system.

    Attributes:
        forward: For every lumped transition ``(j, k)``, the payment on the
            jump plus the reserve after it minus the reserve before it, at
            every node.
        adjustment: ``(W1(t, t) - W2(t)) * mu_bar(t)``, the backward term of
            the retired reserve under the coarsest information.
        adjustment_by_state: For every pre-retirement state ``k``, the term
            ``(W0(t, t, k) - W2(t)) * mu_bar_k(t)``; the terms add up to the
            backward term evaluated with the full-information reserves just
            after retirement.
    """

    grid: TimeGrid
    forward: dict[tuple[str, str], FloatArray]
    adjustment: FloatArray
    adjustment_by_state: FloatArray
