"""
gen-girth, verify and path-dist subcommands.
"""

import logging
from typing import Any, Literal

from pydantic import Field, model_validator

from src.bench.girth import gen_girth_instance
from src.bench.oracle import path_distortion_eval, verify_clan_distortion
from src.commands.base import BaseCommand, BaseCommandParams, load_source
from src.core.checks import assert_le
from src.core.io import load_embedding, load_sequence, save_graph
from src.utils.config import DEFAULT_GIRTH_RETRIES
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


class GenGirthParams(BaseCommandParams):
    command: Literal["gen-girth"] = "gen-girth"
    kind: Literal["dense", "epsilon"]
    n: int = Field(ge=4)
    eps: float | None = Field(default=None, gt=0, le=1)
    retries: int = Field(default=DEFAULT_GIRTH_RETRIES, ge=1)
    out: str


class GenGirthCommand(BaseCommand):
    """Write a high-girth instance as an edge list."""

    params: GenGirthParams

    def inputs(self) -> list[str | None]:
        return []

    def execute(self) -> None:
        p = self.params
        inst = gen_girth_instance(p.kind, p.n, p.eps, p.seed, p.retries)
        save_graph(inst.graph, p.out)
        logger.info(
            f"Wrote {p.out}: n={inst.graph.n}, m={inst.graph.m}, girth={inst.girth}, "
            f"target={inst.target}, attempts={inst.attempts}, subdivisions={inst.subdivisions}"
        )


class VerifyParams(BaseCommandParams):
    command: Literal["verify"] = "verify"
    graph: str | None = None
    metric: str | None = None
    emb: str
    bound: float = Field(ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> "VerifyParams":
        if (self.graph is None) == (self.metric is None):
            raise ValueError("exactly one of --graph or --metric is required")
        return self


class VerifyCommand(BaseCommand):
    """Exhaustive domination and distortion check of a stored embedding."""

    params: VerifyParams

    def inputs(self) -> list[str | None]:
        return [self.params.graph, self.params.metric, self.params.emb]

    def execute(self) -> None:
        p = self.params
        _, m = load_source(p.graph, p.metric)
        host, emb = load_embedding(p.emb)
        if sorted(emb.clans) != list(range(m.n)):
            raise InputError(f"embedding covers {len(emb.clans)} points, metric has {m.n}")
        report = verify_clan_distortion(m, host, emb, p.bound)
        self.emit(report.model_dump())
        report.raise_for_violation()


class PathDistParams(BaseCommandParams):
    command: Literal["path-dist"] = "path-dist"
    emb: str
    seq: str
    graph: str | None = None
    metric: str | None = None


class PathDistCommand(BaseCommand):
    """Cheapest copy sequence along a point sequence."""

    params: PathDistParams

    def inputs(self) -> list[str | None]:
        return [self.params.emb, self.params.seq, self.params.graph, self.params.metric]

    def execute(self) -> dict[str, Any]:
        p = self.params
        host, emb = load_embedding(p.emb)
        seq = load_sequence(p.seq)
        cost, copies = path_distortion_eval(host, emb, seq)
        doc: dict[str, Any] = {"cost": cost, "copies": copies}
        if p.graph is not None or p.metric is not None:
            _, m = load_source(p.graph, p.metric)
            length = float(sum(m.dist[a, b] for a, b in zip(seq, seq[1:], strict=False)))
            assert_le("path_domination", length, cost)
            doc["source_length"] = length
            doc["ratio"] = cost / length if length > 0 else 1.0
        return doc
