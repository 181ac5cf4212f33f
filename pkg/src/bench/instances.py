"""
Seeded test and benchmark instances: standard graphs, random connected
integer-weight graphs, random integer metrics and random measures.
"""

import networkx as nx
import numpy as np

from src.core.graph import WeightedGraph
from src.core.measure import Measure
from src.core.metric import MetricSpace, shortest_path_metric
from src.utils.errors import InputError
from src.utils.rng import make_rng


def from_networkx(graph: nx.Graph, weight: float = 1.0) -> WeightedGraph:
    """Relabel to 0..n-1 in sorted node order; missing weights default to ``weight``."""
    mapping = {node: i for i, node in enumerate(sorted(graph.nodes))}
    edges = [
        (mapping[u], mapping[v], float(data.get("weight", weight)))
        for u, v, data in graph.edges(data=True)
    ]
    return WeightedGraph(len(mapping), edges)


def cycle_graph(n: int) -> WeightedGraph:
    return from_networkx(nx.cycle_graph(n))


def path_graph(n: int) -> WeightedGraph:
    return from_networkx(nx.path_graph(n))


def star_graph(leaves: int) -> WeightedGraph:
    """Center 0 joined to ``leaves`` leaves."""
    return from_networkx(nx.star_graph(leaves))


def grid_graph(rows: int, cols: int) -> WeightedGraph:
    return from_networkx(nx.grid_2d_graph(rows, cols))


def random_connected_graph(
    n: int, seed: int, extra: float = 1.0, max_weight: int = 1
) -> WeightedGraph:
    """
    A random spanning tree plus about ``extra * n`` additional edges, with
    integer weights drawn from 1..max_weight.
    """
    if n < 1:
        raise InputError(f"graph needs at least one vertex, got {n}")
    rng = make_rng(seed)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    order = rng.permutation(n).tolist()
    for i in range(1, n):
        graph.add_edge(order[i], order[int(rng.integers(i))])
    if n > 2:
        for _ in range(int(extra * n)):
            u, v = rng.choice(n, size=2, replace=False).tolist()
            graph.add_edge(u, v)
    for u, v in graph.edges:
        graph.edges[u, v]["weight"] = float(rng.integers(1, max_weight + 1))
    return from_networkx(graph)


def random_metric(n: int, seed: int, max_dist: int = 10) -> MetricSpace:
    """Shortest-path metric of a complete graph with integer weights in 1..max_dist."""
    rng = make_rng(seed)
    weights = rng.integers(1, max_dist + 1, size=(n, n))
    edges = [(u, v, float(weights[u, v])) for u in range(n) for v in range(u + 1, n)]
    return shortest_path_metric(WeightedGraph(n, edges))


def random_ge1_measure(n: int, seed: int, high: float = 4.0) -> Measure:
    """Integer-valued (>=1)-measure with values in 1..high."""
    rng = make_rng(seed)
    return Measure(values=rng.integers(1, int(high) + 1, size=n).astype(float).tolist(), kind="ge1")


def random_probability(n: int, seed: int) -> Measure:
    rng = make_rng(seed)
    return Measure.from_weights(rng.random(n) + 0.05)
