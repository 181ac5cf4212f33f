"""
Measures over point sets: (>=1)-measures and probability measures.
"""

from collections.abc import Iterable
from typing import Literal

import numpy as np
from pydantic import BaseModel, PrivateAttr, model_validator

PROBABILITY_TOL = 1e-12


class Measure(BaseModel):
    """Per-point nonnegative weights of a given kind."""

    values: list[float]
    kind: Literal["ge1", "probability"]

    _array: np.ndarray = PrivateAttr()

    @model_validator(mode="after")
    def _check_kind(self) -> "Measure":
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("measure needs at least one value")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("measure values must be finite and nonnegative")
        if self.kind == "ge1" and np.any(arr < 1):
            raise ValueError(f"ge1 measure has a value below 1: {arr.min()!r}")
        if self.kind == "probability" and abs(arr.sum() - 1.0) > PROBABILITY_TOL:
            raise ValueError(f"probability measure sums to {arr.sum()!r}")
        return self

    def model_post_init(self, __context: object) -> None:
        self._array = np.asarray(self.values, dtype=float)
        self._array.setflags(write=False)

    @property
    def array(self) -> np.ndarray:
        """Read-only numpy view of the values."""
        return self._array

    @property
    def n(self) -> int:
        return int(self._array.size)

    def mass(self, points: Iterable[int] | np.ndarray | None = None) -> float:
        """mu(A) for a point collection A (all points when None)."""
        if points is None:
            return float(self._array.sum())
        idx = points if isinstance(points, np.ndarray) else np.fromiter(points, dtype=np.int64)
        return float(self._array[idx].sum())

    def weighted_sizes(self, sizes: np.ndarray) -> float:
        """sum_x mu(x) * sizes[x]."""
        return float(self._array @ np.asarray(sizes, dtype=float))

    def to_ge1(self) -> "Measure":
        """
        Lift a probability measure to the (>=1)-measure 2n * (1/(2n) + mu/2).

        The result equals 1 + n * mu pointwise and has total mass 2n.
        """
        if self.kind != "probability":
            raise ValueError("only probability measures can be lifted")
        return Measure(values=(1.0 + self.n * self._array).tolist(), kind="ge1")

    @classmethod
    def uniform_probability(cls, n: int) -> "Measure":
        return cls(values=[1.0 / n] * n, kind="probability")

    @classmethod
    def ones(cls, n: int) -> "Measure":
        return cls(values=[1.0] * n, kind="ge1")

    @classmethod
    def from_weights(cls, weights: np.ndarray) -> "Measure":
        """Normalize positive weights into a probability measure."""
        arr = np.asarray(weights, dtype=float)
        arr = arr / arr.sum()
        # the last entry absorbs the rounding so the sum stays within tolerance
        arr[-1] = max(0.0, 1.0 - float(arr[:-1].sum()))
        return cls(values=arr.tolist(), kind="probability")
