"""
route-sim subcommand.
"""

from typing import Any, Literal

from pydantic import Field, field_validator

from src.commands.base import BaseCommand, ModeCommandParams
from src.core.io import load_graph
from src.embedding.params import SpanParams
from src.routing.experiment import routing_experiment


class RouteSimParams(ModeCommandParams):
    command: Literal["route-sim"] = "route-sim"
    graph: str
    labels: Literal["exact", "approx2"] = "exact"
    pairs: int | None = None
    samples: int = Field(default=1, ge=1)

    @field_validator("pairs", mode="before")
    @classmethod
    def _parse_pairs(cls, value: Any) -> int | None:
        if value is None or value == "all":
            return None
        return int(value)


class RouteSimCommand(BaseCommand):
    """Compact routing simulation over sampled spanning clan embeddings."""

    params: RouteSimParams

    def inputs(self) -> list[str | None]:
        return [self.params.graph]

    def execute(self) -> dict[str, Any]:
        p = self.params
        report = routing_experiment(
            load_graph(p.graph),
            SpanParams(k=p.k, epsilon=p.eps, verify=p.verify),
            samples=p.samples,
            seed=p.seed,
            labels=p.labels,
            pairs=p.pairs,
            threads=p.threads,
        )
        return report.model_dump()
