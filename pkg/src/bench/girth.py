"""
Girth computation and high-girth instance generators.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

import networkx as nx

from src.core.graph import WeightedGraph
from src.utils.config import DEFAULT_GIRTH_RETRIES
from src.utils.errors import InputError
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)

GirthKind = Literal["dense", "epsilon"]

TREE_EDGE = nx.algorithms.traversal.breadth_first_search.TREE_EDGE
LEVEL_EDGE = nx.algorithms.traversal.breadth_first_search.LEVEL_EDGE


@dataclass(frozen=True)
class GirthInstance:
    """A generated graph with its realized girth and generation record."""

    graph: WeightedGraph
    girth: float
    target: float
    attempts: int
    kind: GirthKind
    base_vertices: int
    subdivisions: int = 0


def girth(g: WeightedGraph) -> float:
    """Length of the shortest cycle of an unweighted graph, inf for forests."""
    if not g.is_unweighted():
        raise InputError("girth is defined for unweighted graphs only")
    return float(nx.girth(g.to_networkx()))


def shortest_cycle_edge(graph: nx.Graph) -> tuple[int, int] | None:
    """
    A non-tree edge closing a shortest cycle, found by truncated BFS from
    every vertex. Removing it keeps the graph connected.
    """
    best = math.inf
    best_edge = None
    limit = math.inf
    for source in sorted(graph):
        depth = {source: 0}
        for u, v, label in nx.bfs_labeled_edges(graph, source):
            du = depth[u]
            if du > limit:
                break
            if label is TREE_EDGE:
                depth[v] = du + 1
                continue
            level = label is LEVEL_EDGE
            length = 2 * du + 2 - level
            if length < best:
                best = length
                best_edge = (u, v)
                limit = du - level
    return best_edge


def _dense(
    n: int, seed: int, retries: int, stream: int = 0
) -> tuple[nx.Graph, float, float, int]:
    if n < 4:
        raise InputError(f"dense girth instance needs n >= 4, got {n}")
    target = math.log2(n) / 3
    best: tuple[int, float] = (0, 0.0)
    for attempt in range(1, retries + 1):
        rng = make_rng(seed, stream, attempt)
        graph = nx.gnp_random_graph(n, 8 / (n - 1), seed=int(rng.integers(2**32)))
        if not nx.is_connected(graph):
            continue
        while nx.girth(graph) < target:
            edge = shortest_cycle_edge(graph)
            assert edge is not None
            graph.remove_edge(*edge)
        best = max(best, (graph.number_of_edges(), float(nx.girth(graph))))
        surplus = graph.number_of_edges() - 2 * n
        if surplus < 0:
            continue
        tree = {tuple(sorted(e)) for e in nx.bfs_edges(graph, 0)}
        spare = sorted(tuple(sorted(e)) for e in graph.edges if tuple(sorted(e)) not in tree)
        for i in sorted(rng.choice(len(spare), size=surplus, replace=False).tolist()):
            graph.remove_edge(*spare[i])
        realized = float(nx.girth(graph))
        if realized >= target:
            return graph, realized, target, attempt
    raise InputError(
        f"no dense girth instance for n={n} after {retries} attempts "
        f"(best attempt: {best[0]} edges, girth {best[1]})"
    )


def gen_girth_instance(
    kind: GirthKind,
    n: int,
    eps: float | None = None,
    seed: int = 0,
    retries: int = DEFAULT_GIRTH_RETRIES,
) -> GirthInstance:
    """
    Generate an unweighted high-girth graph.

    ``dense``: a connected G(n, 8/(n-1)) sample with shortest-cycle edges
    removed until the girth reaches log2(n)/3, then trimmed to exactly 2n
    edges by deleting random non-BFS-tree edges.

    ``epsilon``: a dense instance on round(n / (1 + 2 delta)) vertices with
    every edge subdivided into a path of delta + 1 edges, where
    delta = round((1 - eps) / (2 eps)); the result has about n vertices and
    (1 + eps) n edges.

    Raises:
        InputError: bad arguments, or the retry budget is exhausted.
    """
    if kind == "dense":
        graph, realized, target, attempts = _dense(n, seed, retries)
        inst = GirthInstance(
            graph=WeightedGraph(n, [(u, v, 1.0) for u, v in sorted(graph.edges)]),
            girth=realized,
            target=target,
            attempts=attempts,
            kind=kind,
            base_vertices=n,
        )
    elif kind == "epsilon":
        if eps is None or not 0 < eps <= 1:
            raise InputError(f"epsilon girth instance needs eps in (0, 1], got {eps}")
        delta = max(0, round((1 - eps) / (2 * eps)))
        base_n = round(n / (1 + 2 * delta))
        graph, base_girth, _, attempts = _dense(base_n, seed, retries, stream=1)
        edges = []
        next_id = base_n
        for u, v in sorted(graph.edges):
            chain = [u, *range(next_id, next_id + delta), v]
            next_id += delta
            edges.extend((a, b, 1.0) for a, b in zip(chain, chain[1:], strict=False))
        subdivided = WeightedGraph(next_id, edges)
        inst = GirthInstance(
            graph=subdivided,
            girth=girth(subdivided),
            target=base_girth * (delta + 1),
            attempts=attempts,
            kind=kind,
            base_vertices=base_n,
            subdivisions=delta,
        )
    else:
        raise InputError(f"unknown girth instance kind '{kind}'")

    logger.info(
        f"Generated {kind} girth instance: n={inst.graph.n}, m={inst.graph.m}, "
        f"girth={inst.girth}, target={inst.target:.3f}, attempts={inst.attempts}"
    )
    return inst
