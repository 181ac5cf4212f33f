"""
build-dist and sample subcommands.
"""

import logging
from typing import Any, Literal

from pydantic import Field

from src.commands.base import BaseCommand, BaseCommandParams, SourceCommandParams, load_source
from src.core.io import embedding_to_dict
from src.distribution.mwu import (
    build_distribution,
    distribution_to_dict,
    load_distribution,
    sample,
)
from src.distribution.oracle import ClanOracle, SpanningOracle, UltrametricOracle
from src.embedding.params import ClanParams, SpanParams
from src.utils.config import DEFAULT_MAX_ROUNDS
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


class BuildDistParams(SourceCommandParams):
    command: Literal["build-dist"] = "build-dist"
    slack: float = Field(gt=0, lt=0.5)
    host: Literal["ultra", "span"] = "ultra"
    variant: Literal["standard", "balanced"] = "standard"
    root: int = 0
    max_rounds: int = Field(default=DEFAULT_MAX_ROUNDS, ge=1)
    log_weights: str | None = None


class BuildDistCommand(BaseCommand):
    """Multiplicative-weights distribution over clan embeddings."""

    params: BuildDistParams

    def inputs(self) -> list[str | None]:
        return [self.params.graph, self.params.metric]

    def execute(self) -> dict[str, Any]:
        p = self.params
        g, m = load_source(p.graph, p.metric)
        oracle: ClanOracle
        if p.host == "span":
            if g is None:
                raise InputError("--host span needs --graph")
            oracle = SpanningOracle(g, SpanParams(k=p.k, epsilon=p.eps, verify=p.verify), p.root)
        else:
            oracle = UltrametricOracle(
                m, ClanParams(k=p.k, epsilon=p.eps, variant=p.variant, verify=p.verify)
            )
        dist = build_distribution(
            oracle,
            m.n,
            p.slack,
            p.max_rounds,
            p.log_weights,
            metric=m if p.verify else None,
        )
        dist.meta.update(
            {"host": p.host, "k": p.k, "eps": p.eps, "variant": p.variant, "n": m.n}
        )
        worst = float(dist.averages.max())
        logger.info(
            f"Distribution of {dist.rounds} members, worst average clan size {worst:.4f} "
            f"(bound {dist.bounds.alpha + dist.slack:.4f})"
        )
        return distribution_to_dict(dist)


class SampleParams(BaseCommandParams):
    command: Literal["sample"] = "sample"
    dist: str


class SampleCommand(BaseCommand):
    """Seeded uniform draw from a stored distribution."""

    params: SampleParams

    def inputs(self) -> list[str | None]:
        return [self.params.dist]

    def execute(self) -> dict[str, Any]:
        host, emb = sample(load_distribution(self.params.dist), self.params.seed)
        return embedding_to_dict(host, emb)
