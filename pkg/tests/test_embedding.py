"""
Tests for the ultrametric and spanning clan embedding builders.
"""

import unittest

import networkx as nx
from pydantic import ValidationError

from src.bench.instances import (
    cycle_graph,
    grid_graph,
    path_graph,
    random_connected_graph,
    random_ge1_measure,
    random_metric,
    random_probability,
)
from src.bench.oracle import verify_clan_distortion
from src.core.graph import WeightedGraph
from src.core.io import embedding_to_dict, write_json
from src.core.measure import Measure
from src.core.metric import shortest_path_metric
from src.embedding.params import (
    ClanParams,
    SpanParams,
    delta_k,
    petal_levels,
    spanning_distortion_bound,
)
from src.embedding.petals import (
    ClusterState,
    cone_distance,
    create_petal,
    petal,
    petal_decomposition,
)
from src.embedding.spanning import hierarchical_petal_decomposition, spanning_clan_embed
from src.embedding.ultrametric import (
    PartitionTrace,
    clan_embed_probability,
    clan_embed_ultrametric,
    partition_ball,
)
from src.utils.errors import InputError


class TestParams(unittest.TestCase):
    """Test cases for parameter models and derived constants."""

    def test_mode_is_exclusive(self):
        """Test that exactly one of k and epsilon is accepted."""
        with self.assertRaises(ValidationError):
            ClanParams()
        with self.assertRaises(ValidationError):
            ClanParams(k=2, epsilon=0.5)
        with self.assertRaises(ValidationError):
            SpanParams(epsilon=1.5)

    def test_constants(self):
        """Test the derived numeric constants."""
        self.assertEqual(delta_k(4, 1.0), 6)
        self.assertEqual(petal_levels(2.0), 1)
        self.assertEqual(petal_levels(4.0), 2)
        self.assertEqual(petal_levels(16.0), 3)
        self.assertEqual(spanning_distortion_bound(1, 16.0), 384.0)
        self.assertEqual(ClanParams(k=3).distortion_factor(3), 48)
        self.assertEqual(ClanParams(k=3, variant="balanced").distortion_factor(3), 64)
        self.assertEqual(ClanParams(epsilon=1.0).internal_k(4), 6)


class TestUltrametric(unittest.TestCase):
    """Test cases for the ultrametric builder."""

    def setUp(self):
        """Random integer metric with an integer (>=1)-measure."""
        self.m = random_metric(14, seed=3)
        self.mu = random_ge1_measure(14, seed=4)

    def test_partition_ball(self):
        """Test the partition invariants on the whole space."""
        part = partition_ball(self.m, self.m.points(), self.mu, 2)
        self.assertLessEqual(set(part.Q.tolist()), set(part.P.tolist()))
        self.assertEqual(set(part.Q.tolist()) | set(part.Qbar.tolist()), set(range(14)))
        self.assertFalse(set(part.Q.tolist()) & set(part.Qbar.tolist()))

    def test_partition_needs_two_points(self):
        """Test rejection of degenerate clusters."""
        with self.assertRaises(InputError):
            partition_ball(self.m, [3], self.mu, 2)

    def test_verified_embedding(self):
        """Test distortion 16k and the measure bound with verification on."""
        for k in (1, 2, 3):
            host, emb = clan_embed_ultrametric(
                self.m, self.m.points(), self.mu, ClanParams(k=k, verify=True)
            )
            report = verify_clan_distortion(self.m, host, emb, 16 * k)
            self.assertTrue(report.ok)
            weighted = self.mu.weighted_sizes(emb.sizes(14))
            self.assertLessEqual(weighted, self.mu.mass() ** (1 + 1 / k) * (1 + 1e-9))

    def test_balanced_trace(self):
        """Test that every balanced split keeps one side below 2/3 of the mass."""
        trace: list[PartitionTrace] = []
        clan_embed_ultrametric(
            self.m,
            self.m.points(),
            self.mu,
            ClanParams(k=2, variant="balanced", verify=True),
            trace=trace,
        )
        self.assertTrue(trace)
        for record in trace:
            self.assertLessEqual(
                min(record.p_mass, record.qbar_mass), 2 * record.mass / 3 + 1e-9
            )
            self.assertLessEqual(record.p_diameter, record.diameter / 2)

    def test_single_point(self):
        """Test that a single point gets one leaf."""
        host, emb = clan_embed_ultrametric(self.m, [5], self.mu, ClanParams(k=1))
        self.assertEqual(host.size, 1)
        self.assertEqual(emb.clans, {5: [0]})

    def test_probability_wrapper(self):
        """Test the expected clan size in both regimes."""
        mu = random_probability(14, seed=5)
        _, emb = clan_embed_probability(self.m, mu, ClanParams(epsilon=0.5))
        self.assertLessEqual(mu.weighted_sizes(emb.sizes(14)), 1.5 + 1e-9)
        _, emb = clan_embed_probability(self.m, mu, ClanParams(k=2, verify=True))
        self.assertLessEqual(mu.weighted_sizes(emb.sizes(14)), 2 * 28**0.5 + 1e-9)

    def test_measure_kind_is_checked(self):
        """Test that each builder rejects the other measure kind."""
        with self.assertRaises(InputError):
            clan_embed_ultrametric(
                self.m, self.m.points(), Measure.uniform_probability(14), ClanParams(k=1)
            )
        with self.assertRaises(InputError):
            clan_embed_probability(self.m, self.mu, ClanParams(k=1))


class TestPetals(unittest.TestCase):
    """Test cases for cone distances, petals and petal decompositions."""

    def setUp(self):
        """Unit path 0-1-2 with a pendant vertex 3 on 1."""
        self.g = WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0)])
        self.state = ClusterState(self.g, frozenset(range(4)), 0, 2, 2.0)

    def test_cone_distance(self):
        """Test the cone distance between the path ends."""
        line = ClusterState(path_graph(3), frozenset(range(3)), 0, 2, 2.0)
        self.assertEqual(cone_distance(line, 0, 2, 0, 2), 4.0)
        self.assertEqual(cone_distance(line, 0, 2, 1, 1), 0.0)

    def test_entry_values(self):
        """Test that path vertices enter at their distance to the target."""
        self.assertEqual(self.state.target_path, [0, 1, 2])
        self.assertEqual(self.state.entries, {0: 2.0, 1: 1.0, 2: 0.0, 3: 1.0})
        self.assertEqual(petal(self.state, 0.0), frozenset({2}))
        self.assertEqual(petal(self.state, 1.0), frozenset({1, 2, 3}))
        with self.assertRaises(InputError):
            petal(self.state, -1.0)

    def test_petals_are_nested_and_connected(self):
        """Test monotonicity in r and connectivity of every petal."""
        g = random_connected_graph(30, seed=8, extra=0.8, max_weight=3)
        state = ClusterState(g, frozenset(range(30)), 0, 17, 0.0)
        graph = g.to_networkx()
        previous: frozenset[int] = frozenset()
        for r in [0.0, 0.5, 1.0, 2.0, 3.5, 5.0, 8.0, 13.0, 40.0]:
            current = petal(state, r)
            self.assertLessEqual(previous, current)
            self.assertIn(17, current)
            self.assertTrue(nx.is_connected(graph.subgraph(current)))
            previous = current

    def test_create_petal(self):
        """Test the radius window, nesting and connector of a carved petal."""
        g = grid_graph(5, 5)
        state = ClusterState(g, frozenset(range(25)), 0, 24, 8.0)
        triple = create_petal(state, Measure.ones(25), 2.0, 4.0, 2)
        self.assertGreaterEqual(triple.radius, 2.0)
        self.assertLessEqual(triple.radius, 4.0)
        self.assertLessEqual(triple.inner, triple.mid)
        self.assertLessEqual(triple.mid, triple.outer)
        self.assertIn(24, triple.inner)
        x, y = triple.connector
        self.assertIn(x, triple.inner)
        self.assertNotIn(y, triple.inner)
        self.assertTrue(g.has_edge(x, y))

    def test_create_petal_rejects_bad_range(self):
        """Test range validation."""
        with self.assertRaises(InputError):
            create_petal(self.state, Measure.ones(4), 1.0, 1.0, 1)

    def test_decomposition_of_a_path(self):
        """Test the single far petal of a nine-vertex path rooted at an end."""
        g = path_graph(9)
        state = ClusterState(g, frozenset(range(9)), 0, 0, 8.0)
        decomp = petal_decomposition(state, Measure.ones(9), 1, verify=True)
        self.assertEqual(len(decomp.petals), 1)
        first = decomp.petals[0]
        self.assertFalse(first.special)
        self.assertEqual(first.triple.inner, frozenset({7, 8}))
        self.assertEqual(first.triple.connector, (7, 6))
        self.assertEqual(first.delta, 1.0)
        self.assertEqual(decomp.central, frozenset(range(7)))
        self.assertEqual(decomp.central_target, 0)
        self.assertEqual(decomp.remaining_radii, [8.0, 6.0])

    def test_special_petal(self):
        """Test the special petal toward a distant target."""
        g = path_graph(9)
        state = ClusterState(g, frozenset(range(9)), 0, 8, 8.0)
        decomp = petal_decomposition(state, Measure.ones(9), 1, verify=True)
        first = decomp.petals[0]
        self.assertTrue(first.special)
        self.assertIn(8, first.triple.inner)
        self.assertNotIn(0, first.triple.inner)
        self.assertEqual(decomp.central_target, first.triple.connector[1])
        self.assertIn(decomp.central_target, decomp.central)

    def test_decomposition_leaves_a_small_center(self):
        """Test that every remaining vertex ends within 3/4 of the budget."""
        g = random_connected_graph(40, seed=2, extra=0.5, max_weight=4)
        mu = random_ge1_measure(40, seed=9)
        radius = ClusterState(g, frozenset(range(40)), 0, 0, 0.0).radius
        state = ClusterState(g, frozenset(range(40)), 0, 0, radius)
        decomp = petal_decomposition(state, mu, 2, verify=True)
        from_center, _ = state.center_tree
        for v in decomp.central:
            self.assertLessEqual(from_center[v], 0.75 * state.delta_in)
        for before, after in zip(decomp.remaining, decomp.remaining[1:], strict=False):
            self.assertLess(after, before)

    def test_decomposition_is_oblivious(self):
        """Test that rerunning on any leftover cluster yields the remaining petals."""
        for seed, target in [(1, 0), (3, 39), (5, 0), (7, 39), (11, 20), (13, 0)]:
            g = random_connected_graph(40, seed=seed, extra=0.6, max_weight=4)
            mu = random_ge1_measure(40, seed=seed + 100)
            radius = ClusterState(g, frozenset(range(40)), 0, 0, 0.0).radius
            state = ClusterState(g, frozenset(range(40)), 0, target, radius)
            decomp = petal_decomposition(state, mu, 2)
            for start in range(1, len(decomp.remaining)):
                leftover = ClusterState(g, decomp.remaining[start], 0, 0, radius)
                again = petal_decomposition(leftover, mu, 2)
                self.assertEqual(
                    [p.triple.inner for p in again.petals],
                    [p.triple.inner for p in decomp.petals[start:]],
                )
                self.assertEqual(again.central, decomp.central)


class TestSpanning(unittest.TestCase):
    """Test cases for spanning clan embeddings."""

    def _check(self, g, tree, emb):
        tree.validate(g)
        emb.validate(range(tree.size), require_cover=True)
        for copy, vertex in emb.owner_map().items():
            self.assertEqual(tree.orig[copy], vertex)

    def test_single_vertex(self):
        """Test the one-vertex graph."""
        g = WeightedGraph(1, [])
        tree, emb = hierarchical_petal_decomposition(
            g, 0, Measure.ones(1), SpanParams(k=1, verify=True)
        )
        self.assertEqual(tree.size, 1)
        self.assertEqual(emb.clans, {0: [0]})

    def test_path(self):
        """Test that a tree input is embedded with every bound verified."""
        g = path_graph(8)
        tree, emb = hierarchical_petal_decomposition(
            g, 0, Measure.ones(8), SpanParams(k=1, verify=True)
        )
        self._check(g, tree, emb)

    def test_grid_measure_bound(self):
        """Test the copy-measure bound on a 6x6 grid with k=2."""
        g = grid_graph(6, 6)
        tree, emb = hierarchical_petal_decomposition(
            g, 0, Measure.ones(36), SpanParams(k=2, verify=True)
        )
        self._check(g, tree, emb)
        self.assertLessEqual(emb.total_copies, 216)
        report = verify_clan_distortion(
            shortest_path_metric(g), tree, emb, spanning_distortion_bound(2, 36.0)
        )
        self.assertTrue(report.ok)

    def test_weighted_graph(self):
        """Test a random weighted graph with a random (>=1)-measure."""
        g = random_connected_graph(25, seed=6, extra=1.0, max_weight=5)
        mu = random_ge1_measure(25, seed=7)
        tree, emb = hierarchical_petal_decomposition(g, 3, mu, SpanParams(k=2, verify=True))
        self._check(g, tree, emb)
        self.assertEqual(tree.orig[tree.root], 3)

    def test_cycle_epsilon(self):
        """Test the expected clan size on a 16-cycle with epsilon 1."""
        g = cycle_graph(16)
        tree, emb = spanning_clan_embed(g, SpanParams(epsilon=1.0, verify=True))
        self._check(g, tree, emb)
        self.assertLessEqual(emb.total_copies / 16, 2.0 + 1e-9)

    def test_rejects_bad_input(self):
        """Test measure and root validation."""
        g = path_graph(4)
        with self.assertRaises(InputError):
            hierarchical_petal_decomposition(
                g, 0, Measure.uniform_probability(4), SpanParams(k=1)
            )
        with self.assertRaises(InputError):
            hierarchical_petal_decomposition(g, 9, Measure.ones(4), SpanParams(k=1))
        with self.assertRaises(InputError):
            spanning_clan_embed(g, SpanParams(k=1), mu=Measure.ones(4))


class TestDeterminism(unittest.TestCase):
    """Test cases for reproducible builder output."""

    def test_ultrametric_output_is_stable(self):
        """Test that two builds over equal inputs serialize identically."""
        docs = []
        for _ in range(2):
            m = random_metric(25, seed=3)
            host, emb = clan_embed_ultrametric(
                m, m.points(), random_ge1_measure(25, seed=4), ClanParams(k=2)
            )
            docs.append(write_json(embedding_to_dict(host, emb), None))
        self.assertEqual(docs[0], docs[1])

    def test_spanning_output_is_stable(self):
        """Test that two spanning builds serialize identically."""
        docs = []
        for _ in range(2):
            g = random_connected_graph(30, seed=4, extra=0.8, max_weight=5)
            tree, emb = spanning_clan_embed(
                g, SpanParams(epsilon=0.5), random_probability(30, seed=5), root=7
            )
            docs.append(write_json(embedding_to_dict(tree, emb), None))
        self.assertEqual(docs[0], docs[1])


if __name__ == "__main__":
    unittest.main()
