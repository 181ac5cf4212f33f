"""
Weighted undirected graphs and deterministic shortest paths.
"""

import heapq
import logging
import math
from collections.abc import Iterable, Mapping

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from src.utils.errors import InputError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]
WeightOverlay = Mapping[Edge, float]


def edge_key(u: int, v: int) -> Edge:
    """Canonical key of the unordered pair {u, v}."""
    return (u, v) if u < v else (v, u)


class WeightedGraph:
    """
    Connected undirected graph with positive edge lengths.

    Vertex ids are ``0..n-1``. Adjacency lists are sorted by neighbor id so
    every traversal is deterministic.
    """

    def __init__(
        self, n: int, edges: Iterable[tuple[int, int, float]], validate: bool = True
    ) -> None:
        self.n = int(n)
        self.edges: list[tuple[int, int, float]] = [
            (int(u), int(v), float(w)) for u, v, w in edges
        ]
        self._weights: dict[Edge, float] = {}
        self.adjacency: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]

        for u, v, w in self.edges:
            if validate:
                self._check_edge(u, v, w)
            self._weights[edge_key(u, v)] = w
            if 0 <= u < self.n and 0 <= v < self.n:
                self.adjacency[u].append((v, w))
                self.adjacency[v].append((u, w))

        for neighbors in self.adjacency:
            neighbors.sort()

        if validate:
            self._check_connected()

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        """Length of edge {u, v}; raises KeyError if absent."""
        return self._weights[edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._weights

    def is_unweighted(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_weighted_edges_from(self.edges)
        return graph

    def to_csr(self) -> csr_matrix:
        """Symmetric sparse adjacency matrix with edge lengths as entries."""
        if not self.edges:
            return csr_matrix((self.n, self.n))
        rows = np.array([u for u, _, _ in self.edges] + [v for _, v, _ in self.edges])
        cols = np.array([v for _, v, _ in self.edges] + [u for u, _, _ in self.edges])
        data = np.array([w for _, _, w in self.edges] * 2, dtype=float)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def _check_edge(self, u: int, v: int, w: float) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InputError(f"edge ({u}, {v}) references a vertex outside 0..{self.n - 1}")
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        if not math.isfinite(w) or w <= 0:
            raise InputError(f"edge ({u}, {v}) has nonpositive or non-finite weight {w}")
        if edge_key(u, v) in self._weights:
            raise InputError(f"duplicate edge ({u}, {v})")

    def _check_connected(self) -> None:
        if self.n == 0:
            raise InputError("graph has no vertices")
        graph = self.to_networkx()
        if not nx.is_connected(graph):
            seen = nx.node_connected_component(graph, 0)
            raise InputError(
                f"graph is disconnected: {len(seen)} of {self.n} vertices reachable from 0"
            )


def working_weight(g: WeightedGraph, overlay: WeightOverlay | None, u: int, v: int) -> float:
    """Edge length after applying a halving overlay, if any."""
    key = edge_key(u, v)
    if overlay is not None and key in overlay:
        return overlay[key]
    return g.weight(u, v)


def dijkstra(
    g: WeightedGraph,
    source: int,
    vertices: frozenset[int] | set[int] | None = None,
    overlay: WeightOverlay | None = None,
) -> tuple[dict[int, float], dict[int, int]]:
    """
    Single-source shortest paths inside the induced subgraph G[vertices].

    Among equal-length paths the predecessor with the smaller id wins, which
    makes the resulting shortest-path tree unique and reproducible.

    Args:
        g: Host graph.
        source: Start vertex, must lie in ``vertices``.
        vertices: Vertex set of the induced subgraph (all of V when None).
        overlay: Optional per-edge length overrides.

    Returns:
        (dist, pred) restricted to reachable vertices; ``pred[source] == -1``.
    """
    if vertices is not None and source not in vertices:
        raise InputError(f"source {source} outside the vertex set")

    dist: dict[int, float] = {source: 0.0}
    pred: dict[int, int] = {source: -1}
    done: set[int] = set()
    heap = [(0.0, source)]

    while heap:
        d_u, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in g.adjacency[u]:
            if vertices is not None and v not in vertices:
                continue
            if overlay is not None:
                w = overlay.get(edge_key(u, v), w)
            candidate = d_u + w
            known = dist.get(v)
            if known is None or candidate < known:
                dist[v] = candidate
                pred[v] = u
                heapq.heappush(heap, (candidate, v))
            elif candidate == known and v not in done and u < pred[v]:
                pred[v] = u

    return dist, pred


def path_to(pred: Mapping[int, int], target: int) -> list[int]:
    """Walk a predecessor map back from ``target``; returns source..target."""
    if target not in pred:
        raise InputError(f"vertex {target} is unreachable")
    path = [target]
    while pred[path[-1]] != -1:
        path.append(pred[path[-1]])
    path.reverse()
    return path


def all_pairs_distances(g: WeightedGraph) -> np.ndarray:
    """Dense all-pairs shortest-path table (per-source Dijkstra in scipy)."""
    return np.asarray(shortest_path(g.to_csr(), method="D", directed=False), dtype=float)
