"""
Base command interface for the clanroute subcommands.
"""

import logging
import sys
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, model_validator

from src.core.graph import WeightedGraph
from src.core.io import load_graph, load_measure, load_metric_csv, to_jsonable, write_json
from src.core.measure import Measure
from src.core.metric import MetricSpace, shortest_path_metric
from src.utils.config import Config
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


class BaseCommandParams(BaseModel):
    """Parameters shared by every subcommand (the run configuration)."""

    command: str
    seed: int = Field(default=0, ge=0)
    threads: int | None = Field(default=None, ge=1)
    verify: bool = False
    out: str | None = None


class ModeCommandParams(BaseCommandParams):
    """Commands that take exactly one of --k or --eps."""

    k: int | None = Field(default=None, ge=1)
    eps: float | None = Field(default=None, gt=0, le=1)

    @model_validator(mode="after")
    def _one_mode(self) -> "ModeCommandParams":
        if (self.k is None) == (self.eps is None):
            raise ValueError("exactly one of --k or --eps is required")
        return self


class SourceCommandParams(ModeCommandParams):
    """Commands reading a graph or a dense metric."""

    graph: str | None = None
    metric: str | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "SourceCommandParams":
        if (self.graph is None) == (self.metric is None):
            raise ValueError("exactly one of --graph or --metric is required")
        return self


def check_inputs(*paths: str | None) -> None:
    """Fail before any work when an input file is missing."""
    for path in paths:
        if path is not None and not Path(path).is_file():
            raise InputError(f"input not found: {path}")


def load_source(graph: str | None, metric: str | None) -> tuple[WeightedGraph | None, MetricSpace]:
    """The graph (when given) and the metric to embed."""
    if graph is not None:
        g = load_graph(graph)
        return g, shortest_path_metric(g)
    assert metric is not None
    return None, load_metric_csv(metric)


def load_probability(path: str | None, n: int) -> Measure:
    """Measure file contents, or the uniform probability measure."""
    if path is None:
        return Measure.uniform_probability(n)
    return load_measure(path, n, "probability")


class BaseCommand(ABC):
    """Base class for all subcommands."""

    def __init__(self, params: BaseCommandParams, config: Config) -> None:
        self.params = params
        self.config = config

    @abstractmethod
    def inputs(self) -> list[str | None]:
        """Input paths validated before work starts."""

    @abstractmethod
    def execute(self) -> dict[str, Any] | None:
        """Run the command and return the JSON document to emit, if any."""

    def run(self) -> None:
        check_inputs(*self.inputs())
        doc = self.execute()
        if doc is not None:
            self.emit(doc)

    def emit(self, doc: dict[str, Any]) -> None:
        """Write ``doc`` to --out, or to stdout when no path was given."""
        text = write_json(to_jsonable(doc), self.params.out)
        if self.params.out is None:
            sys.stdout.write(text)
        else:
            logger.info(f"Wrote {self.params.command} output to {self.params.out}")
