"""
Parameter models for the clan embedding builders.
"""

import math
from typing import Literal

from pydantic import BaseModel, Field, model_validator


def delta_k(n: int, epsilon: float) -> int:
    """
    Internal distortion parameter for the epsilon regime.

    Returns 1/delta = ceil(ln(2n) / ln(1 + epsilon/2)), so that
    (2n)^delta <= 1 + epsilon/2.
    """
    return max(1, math.ceil(math.log(2 * n) / math.log1p(epsilon / 2)))


class ModeParams(BaseModel):
    """Exactly one of ``k`` (distortion regime) or ``epsilon`` (copy regime)."""

    k: int | None = Field(default=None, ge=1)
    epsilon: float | None = Field(default=None, gt=0, le=1)
    verify: bool = False

    @model_validator(mode="after")
    def _one_mode(self) -> "ModeParams":
        if (self.k is None) == (self.epsilon is None):
            raise ValueError("exactly one of k or epsilon must be set")
        return self

    def internal_k(self, n: int) -> int:
        """k used by the (>=1)-measure builder for an n-point input."""
        if self.k is not None:
            return self.k
        assert self.epsilon is not None
        return delta_k(n, self.epsilon)


class ClanParams(ModeParams):
    """Ultrametric clan embedding parameters."""

    variant: Literal["standard", "balanced"] = "standard"

    def distortion_factor(self, k: int) -> int:
        """16k for the standard partition, 16(k+1) for the balanced one."""
        return 16 * (k + 1) if self.variant == "balanced" else 16 * k


class SpanParams(ModeParams):
    """Spanning clan embedding parameters."""


def petal_levels(total_mass: float) -> int:
    """L = ceil(1 + log2 log2 mu), and 1 when mu <= 2."""
    if total_mass <= 2:
        return 1
    return math.ceil(1 + math.log2(math.log2(total_mass)))


def spanning_distortion_bound(k: int, total_mass: float) -> float:
    """128 * k * ceil(1 + log log mu(V)) for the spanning construction."""
    return 128.0 * k * petal_levels(total_mass)
