"""
embed-ultra and embed-span subcommands.
"""

import logging
from typing import Any, Literal

from src.bench.oracle import copy_stats
from src.commands.base import (
    BaseCommand,
    ModeCommandParams,
    SourceCommandParams,
    load_probability,
    load_source,
)
from src.core.io import embedding_to_dict, load_graph, load_measure
from src.embedding.params import ClanParams, SpanParams
from src.embedding.spanning import spanning_clan_embed
from src.embedding.ultrametric import clan_embed_probability, clan_embed_ultrametric
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


class EmbedUltraParams(SourceCommandParams):
    command: Literal["embed-ultra"] = "embed-ultra"
    measure: str | None = None
    measure_kind: Literal["ge1", "probability"] = "probability"
    variant: Literal["standard", "balanced"] = "standard"


class EmbedUltraCommand(BaseCommand):
    """Clan embedding of a metric into an ultrametric."""

    params: EmbedUltraParams

    def inputs(self) -> list[str | None]:
        return [self.params.graph, self.params.metric, self.params.measure]

    def execute(self) -> dict[str, Any]:
        p = self.params
        _, m = load_source(p.graph, p.metric)
        clan_params = ClanParams(k=p.k, epsilon=p.eps, variant=p.variant, verify=p.verify)
        if p.measure_kind == "ge1":
            if p.k is None:
                raise InputError("a ge1 measure needs --k")
            if p.measure is None:
                raise InputError("--measure-kind ge1 needs --measure")
            mu = load_measure(p.measure, m.n, "ge1")
            host, emb = clan_embed_ultrametric(m, m.points(), mu, clan_params)
        else:
            mu = load_probability(p.measure, m.n)
            host, emb = clan_embed_probability(m, mu, clan_params)
        logger.info(f"Ultrametric embedding stats: {copy_stats(emb)}")
        return embedding_to_dict(host, emb)


class EmbedSpanParams(ModeCommandParams):
    command: Literal["embed-span"] = "embed-span"
    graph: str
    measure: str | None = None
    root: int = 0


class EmbedSpanCommand(BaseCommand):
    """Spanning clan embedding of a graph into a tree."""

    params: EmbedSpanParams

    def inputs(self) -> list[str | None]:
        return [self.params.graph, self.params.measure]

    def execute(self) -> dict[str, Any]:
        p = self.params
        g = load_graph(p.graph)
        mu = load_probability(p.measure, g.n)
        if not 0 <= p.root < g.n:
            raise InputError(f"root {p.root} outside 0..{g.n - 1}")
        tree, emb = spanning_clan_embed(
            g, SpanParams(k=p.k, epsilon=p.eps, verify=p.verify), mu, p.root
        )
        logger.info(f"Spanning embedding stats: {copy_stats(emb)}, radius={tree.radius()}")
        return embedding_to_dict(tree, emb)
