"""
Spanning clan embeddings of weighted graphs into trees.

The hierarchical petal decomposition splits a cluster into petals and a
central cluster, recurses on each, and glues the subtrees with the connector
edges. Petal overlaps are what create extra copies.
"""

import logging
import sys
from dataclasses import dataclass

from src.bench.oracle import verify_clan_distortion
from src.core.checks import assert_le
from src.core.graph import WeightedGraph
from src.core.hosts import ClanEmbedding, SpanningTree
from src.core.measure import Measure
from src.core.metric import shortest_path_metric
from src.embedding.params import SpanParams, spanning_distortion_bound
from src.embedding.petals import ClusterState, petal_decomposition
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


@dataclass
class _SubTree:
    root: int
    clans: dict[int, list[int]]
    chief: dict[int, int]


class _SpanningRecursion:
    def __init__(self, g: WeightedGraph, mu: Measure, k: int, verify: bool) -> None:
        self.g = g
        self.mu = mu
        self.k = k
        self.verify = verify
        self.orig: list[int] = []
        self.edges: list[tuple[int, int, float]] = []

    def _new_copy(self, vertex: int) -> int:
        self.orig.append(vertex)
        return len(self.orig) - 1

    def run(self, state: ClusterState, depth: int) -> _SubTree:
        if len(state.vertices) == 1:
            copy = self._new_copy(state.center)
            return _SubTree(copy, {state.center: [copy]}, {state.center: copy})

        decomp = petal_decomposition(state, self.mu, self.k, self.verify)
        central = ClusterState(
            self.g,
            decomp.central,
            state.center,
            decomp.central_target,
            decomp.remaining_radii[-1],
            state.local_weights,
        )
        subs = [self.run(central, depth + 1)]
        for p in decomp.petals:
            sub_state = ClusterState(
                self.g, p.triple.outer, p.center, p.triple.target, p.delta, p.overlay
            )
            subs.append(self.run(sub_state, depth + 1))

        mids = [p.triple.mid for p in decomp.petals]

        def owner_of(vertex: int, after: int) -> _SubTree:
            # first petal j > after whose mid set holds the vertex, else the central cluster
            for j in range(after, len(mids)):
                if vertex in mids[j]:
                    return subs[j + 1]
            return subs[0]

        clans: dict[int, list[int]] = {}
        chief: dict[int, int] = {}
        for z in state.vertices:
            clans[z] = [c for sub in subs for c in sub.clans.get(z, [])]
            chief[z] = owner_of(z, 0).chief[z]

        for j, p in enumerate(decomp.petals):
            x_j, y_j = p.triple.connector
            attach = owner_of(y_j, j + 1).chief[y_j]
            self.edges.append((subs[j + 1].root, attach, self.g.weight(x_j, y_j)))

        if self.verify:
            weighted = sum(self.mu.array[z] * len(c) for z, c in clans.items())
            bound = self.mu.mass(state.vertices) ** (1 + 1 / self.k)
            assert_le("cluster_measure_bound", weighted, bound, f"depth={depth}")

        logger.debug(
            f"Cluster of {len(state.vertices)} around {state.center} at depth {depth}: "
            f"{len(decomp.petals)} petals"
        )
        return _SubTree(subs[0].root, clans, chief)


def hierarchical_petal_decomposition(
    g: WeightedGraph, x0: int, mu: Measure, params: SpanParams
) -> tuple[SpanningTree, ClanEmbedding]:
    """
    Spanning clan embedding of ``g`` for a (>=1)-measure.

    Args:
        g: Connected weighted graph.
        x0: Root vertex; the first call uses target x0 and budget equal to the
            radius of the graph from x0.
        mu: (>=1)-measure on the vertices.
        params: Must carry ``k``.

    Returns:
        (tree, embedding) where tree vertices are copies and every tree edge
        is a graph edge of the same weight.
    """
    if mu.kind != "ge1":
        raise InputError("hierarchical_petal_decomposition needs a ge1 measure")
    if params.k is None:
        raise InputError("hierarchical_petal_decomposition needs an integer k")
    if mu.n != g.n:
        raise InputError(f"measure has {mu.n} points, graph has {g.n}")
    if not 0 <= x0 < g.n:
        raise InputError(f"root {x0} outside 0..{g.n - 1}")

    k = params.k
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 8 * g.n + 1000))
    root_state = ClusterState(g, frozenset(range(g.n)), x0, x0, 0.0)
    budget = root_state.radius
    root_state = ClusterState(g, root_state.vertices, x0, x0, budget)

    recursion = _SpanningRecursion(g, mu, k, params.verify)
    top = recursion.run(root_state, depth=0)
    tree = SpanningTree(recursion.orig, recursion.edges, root=top.root)
    emb = ClanEmbedding(top.clans, top.chief)

    radius = tree.radius()
    if params.verify:
        tree.validate(g)
        emb.validate(range(tree.size), require_cover=True)
        for copy, vertex in emb.owner_map().items():
            if tree.orig[copy] != vertex:
                raise InputError(f"copy {copy} is owned by {vertex} but copies {tree.orig[copy]}")
        bound = spanning_distortion_bound(k, mu.mass())
        report = verify_clan_distortion(shortest_path_metric(g), tree, emb, bound)
        report.raise_for_violation()
        assert_le("tree_radius", radius, 8 * budget, f"root={x0}")
    weighted = mu.weighted_sizes(emb.sizes(g.n))
    assert_le("measure_bound", weighted, mu.mass() ** (1 + 1 / k))

    logger.info(
        f"Spanning clan embedding of n={g.n}: {emb.total_copies} copies, "
        f"radius={radius} (budget {budget}, ratio {radius / budget if budget else 0.0:.3f})"
    )
    return tree, emb


def spanning_clan_embed(
    g: WeightedGraph, params: SpanParams, mu: Measure | None = None, root: int = 0
) -> tuple[SpanningTree, ClanEmbedding]:
    """
    Spanning clan embedding for a probability measure (uniform by default).

    The measure is lifted to 1 + n*mu exactly like the ultrametric wrapper;
    expected and maximum copy counts are always asserted.
    """
    n = g.n
    mu = Measure.uniform_probability(n) if mu is None else mu
    if mu.kind != "probability":
        raise InputError("spanning_clan_embed needs a probability measure")
    if mu.n != n:
        raise InputError(f"measure has {mu.n} points, graph has {n}")

    k_int = params.internal_k(n)
    inner = SpanParams(k=k_int, verify=params.verify)
    tree, emb = hierarchical_petal_decomposition(g, root, mu.to_ge1(), inner)

    sizes = emb.sizes(n)
    expected = mu.weighted_sizes(sizes)
    if params.epsilon is not None:
        eps = params.epsilon
        assert_le("expected_copies", expected, 1 + eps, f"epsilon={eps}")
        assert_le("max_copies_per_point", float(sizes.max()), (1 + eps) * n + 1)
    else:
        assert_le("expected_copies", expected, 2 * (2 * n) ** (1 / k_int), f"k={k_int}")
    assert_le("total_copies", float(sizes.sum()), (2 * n) ** (1 + 1 / k_int))
    return tree, emb
