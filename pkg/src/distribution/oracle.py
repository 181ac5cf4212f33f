"""
Bounded clan embedding oracles for the multiplicative-weights builder.

An oracle answers a probability measure with a clan embedding whose clans
hold at most rho copies, whose expected clan size under the measure is at
most alpha, and whose distortion is at most beta.
"""

import logging
from abc import ABC, abstractmethod

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.core.graph import WeightedGraph
from src.core.hosts import ClanEmbedding, SpanningTree, Ultrametric, UltrametricBuilder
from src.core.measure import Measure
from src.core.metric import MetricSpace
from src.embedding.params import (
    ClanParams,
    ModeParams,
    SpanParams,
    delta_k,
    spanning_distortion_bound,
)
from src.embedding.spanning import spanning_clan_embed
from src.embedding.ultrametric import clan_embed_probability

logger = logging.getLogger(__name__)

Host = Ultrametric | SpanningTree


class OracleBounds(BaseModel):
    """Max copies per point (rho), expected copies (alpha), distortion (beta)."""

    rho: float = Field(ge=1)
    alpha: float = Field(ge=1)
    beta: float = Field(ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> "OracleBounds":
        if self.rho < self.alpha:
            raise ValueError(f"rho={self.rho} must be at least alpha={self.alpha}")
        return self


def mode_bounds(params: ModeParams, n: int) -> tuple[float, float, int]:
    """
    (rho, alpha, internal k) of the probability wrappers for an n-point input.

    In the epsilon regime the wrapper runs with epsilon/2, so alpha = 1 + eps/2
    and rho = (1 + eps/2) * 2n; otherwise rho = (2n)^(1+1/k) and
    alpha = 2 (2n)^(1/k).
    """
    if params.epsilon is not None:
        half = params.epsilon / 2
        return (1 + half) * 2 * n, 1 + half, delta_k(n, half)
    assert params.k is not None
    k = params.k
    return (2 * n) ** (1 + 1 / k), 2 * (2 * n) ** (1 / k), k


class ClanOracle(ABC):
    """Answers a probability measure with a clan embedding."""

    @abstractmethod
    def bounds(self, n: int) -> OracleBounds:
        """Guarantees of every embedding this oracle returns for n points."""

    @abstractmethod
    def embed(self, measure: Measure) -> tuple[Host, ClanEmbedding]:
        """Clan embedding for one round's probability measure."""


class UltrametricOracle(ClanOracle):
    """Probability wrapper of the ultrametric builder."""

    def __init__(self, m: MetricSpace, params: ClanParams) -> None:
        self.m = m
        self.params = params

    def _wrapper_params(self) -> ClanParams:
        if self.params.epsilon is not None:
            return ClanParams(
                epsilon=self.params.epsilon / 2,
                variant=self.params.variant,
                verify=self.params.verify,
            )
        return self.params

    def bounds(self, n: int) -> OracleBounds:
        rho, alpha, k = mode_bounds(self.params, n)
        return OracleBounds(rho=rho, alpha=alpha, beta=self.params.distortion_factor(k))

    def embed(self, measure: Measure) -> tuple[Host, ClanEmbedding]:
        return clan_embed_probability(self.m, measure, self._wrapper_params())


class SpanningOracle(ClanOracle):
    """Probability wrapper of the spanning builder, rooted at a fixed vertex."""

    def __init__(self, g: WeightedGraph, params: SpanParams, root: int = 0) -> None:
        self.g = g
        self.params = params
        self.root = root

    def bounds(self, n: int) -> OracleBounds:
        rho, alpha, k = mode_bounds(self.params, n)
        return OracleBounds(rho=rho, alpha=alpha, beta=spanning_distortion_bound(k, 2 * n))

    def embed(self, measure: Measure) -> tuple[Host, ClanEmbedding]:
        params = self.params
        if params.epsilon is not None:
            params = SpanParams(epsilon=params.epsilon / 2, verify=params.verify)
        return spanning_clan_embed(self.g, params, measure, self.root)


class ConstantOracle(ClanOracle):
    """
    Always returns the same embedding: every point is a singleton leaf under
    one root labeled with the diameter.
    """

    def __init__(self, m: MetricSpace) -> None:
        builder = UltrametricBuilder()
        leaves = [builder.add_leaf(x) for x in range(m.n)]
        diam = float(m.dist.max())
        if m.n > 1:
            builder.add_internal(diam, leaves)
        self.host = builder.build()
        self.emb = ClanEmbedding({x: [c] for x, c in enumerate(leaves)}, dict(enumerate(leaves)))
        off = m.dist[~np.eye(m.n, dtype=bool)]
        self.beta = max(1.0, diam / float(off.min())) if off.size else 1.0
        self.calls = 0

    def bounds(self, n: int) -> OracleBounds:
        return OracleBounds(rho=1, alpha=1, beta=self.beta)

    def embed(self, measure: Measure) -> tuple[Host, ClanEmbedding]:
        self.calls += 1
        return self.host, self.emb
