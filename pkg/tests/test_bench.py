"""
Tests for the brute-force oracles, girth instances and the Euler check.
"""

import math
import unittest

import networkx as nx

from src.bench.euler import euler_tightness_check
from src.bench.girth import gen_girth_instance, girth, shortest_cycle_edge
from src.bench.instances import cycle_graph, path_graph, random_metric, star_graph
from src.bench.oracle import copy_stats, path_distortion_eval, verify_clan_distortion
from src.core.graph import WeightedGraph
from src.core.hosts import ClanEmbedding, SpanningTree, UltrametricBuilder
from src.core.measure import Measure
from src.core.metric import shortest_path_metric
from src.embedding.params import ClanParams, SpanParams
from src.embedding.spanning import spanning_clan_embed
from src.embedding.ultrametric import clan_embed_ultrametric
from src.utils.errors import InequalityViolation, InputError


class TestVerifyOracle(unittest.TestCase):
    """Test cases for the exhaustive distortion check."""

    def setUp(self):
        """Ultrametric clan embedding of a random metric."""
        self.m = random_metric(10, seed=11)
        self.host, self.emb = clan_embed_ultrametric(
            self.m, self.m.points(), Measure.ones(10), ClanParams(k=2)
        )

    def test_valid_embedding(self):
        """Test a correct embedding against its bound."""
        report = verify_clan_distortion(self.m, self.host, self.emb, 32)
        self.assertTrue(report.ok)
        self.assertEqual(report.pairs_checked, 90)
        report.raise_for_violation()

    def test_tight_bound_is_reported(self):
        """Test a bound below the realized distortion."""
        report = verify_clan_distortion(self.m, self.host, self.emb, 1.0)
        if report.max_distortion_ratio > 1.0 + 1e-9:
            with self.assertRaises(InequalityViolation) as ctx:
                report.raise_for_violation()
            self.assertEqual(ctx.exception.inequality, "distortion")

    def test_non_dominating_tree(self):
        """Test that a shortcut edge breaks domination."""
        m = shortest_path_metric(path_graph(3))
        tree = SpanningTree([0, 1, 2], [(0, 1, 1.0), (0, 2, 0.5)])
        emb = ClanEmbedding({0: [0], 1: [1], 2: [2]}, {0: 0, 1: 1, 2: 2})
        report = verify_clan_distortion(m, tree, emb, 10.0)
        self.assertFalse(report.dominating_ok)
        with self.assertRaises(InequalityViolation) as ctx:
            report.raise_for_violation()
        self.assertEqual(ctx.exception.inequality, "domination")

    def test_measure_bound(self):
        """Test the optional copy-measure check."""
        report = verify_clan_distortion(
            self.m,
            self.host,
            self.emb,
            32,
            measure=Measure.ones(10).array,
            measure_bound=float(self.emb.total_copies) - 1,
        )
        self.assertFalse(report.measure_bound_ok)
        with self.assertRaises(InequalityViolation):
            report.raise_for_violation()

    def test_copy_without_owner(self):
        """Test that host copies outside every clan are rejected."""
        m = shortest_path_metric(path_graph(2))
        builder = UltrametricBuilder()
        a, b, c = builder.add_leaf(0), builder.add_leaf(1), builder.add_leaf(1)
        builder.add_internal(2.0, (a, b, c))
        emb = ClanEmbedding({0: [a], 1: [b]}, {0: a, 1: b})
        with self.assertRaises(InputError) as ctx:
            verify_clan_distortion(m, builder.build(), emb, 4.0)
        self.assertIn("host copy 2 belongs to no clan", str(ctx.exception))
        tree = SpanningTree([0, 1, 1], [(0, 1, 1.0), (1, 2, 1.0)])
        with self.assertRaises(InputError):
            verify_clan_distortion(m, tree, emb, 4.0)

    def test_path_distortion(self):
        """Test the cheapest copy sequence on a path tree with two copies."""
        tree = SpanningTree([0, 1, 2, 0], [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
        emb = ClanEmbedding({0: [0, 3], 1: [1], 2: [2]}, {0: 0, 1: 1, 2: 2})
        cost, copies = path_distortion_eval(tree, emb, [2, 0, 1])
        self.assertEqual(cost, 3.0)
        self.assertEqual(copies, [2, 0, 1])
        cost, copies = path_distortion_eval(tree, emb, [1, 0])
        self.assertEqual((cost, copies), (1.0, [1, 0]))
        with self.assertRaises(InputError):
            path_distortion_eval(tree, emb, [0])

    def test_copy_stats(self):
        """Test clan size statistics."""
        stats = copy_stats(ClanEmbedding({0: [0, 2], 1: [1]}, {0: 0, 1: 1}))
        self.assertEqual(stats, {"clan_mean": 1.5, "clan_max": 2.0, "total_copies": 3.0})


class TestGirth(unittest.TestCase):
    """Test cases for girth and high-girth instances."""

    def test_girth_values(self):
        """Test triangles, cycles and trees."""
        triangle = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
        self.assertEqual(girth(triangle), 3.0)
        self.assertEqual(girth(cycle_graph(9)), 9.0)
        self.assertTrue(math.isinf(girth(star_graph(4))))
        with self.assertRaises(InputError):
            girth(WeightedGraph(2, [(0, 1, 2.0)]))

    def test_shortest_cycle_edge(self):
        """Test that the returned edge lies on a shortest cycle."""
        graph = nx.cycle_graph(7)
        graph.add_edge(0, 3)
        edge = shortest_cycle_edge(graph)
        self.assertIsNotNone(edge)
        graph.remove_edge(*edge)
        self.assertTrue(nx.is_connected(graph))
        self.assertIsNone(shortest_cycle_edge(nx.path_graph(5)))

    def test_dense_instance(self):
        """Test edge count and girth target of a dense instance."""
        inst = gen_girth_instance("dense", 64, seed=1)
        self.assertEqual(inst.graph.n, 64)
        self.assertEqual(inst.graph.m, 128)
        self.assertGreaterEqual(inst.girth, math.log2(64) / 3)
        self.assertEqual(inst.girth, girth(inst.graph))
        again = gen_girth_instance("dense", 64, seed=1)
        self.assertEqual(again.graph.edges, inst.graph.edges)

    def test_epsilon_instance(self):
        """Test subdivision of a dense instance."""
        inst = gen_girth_instance("epsilon", 60, eps=1 / 3, seed=2)
        self.assertEqual(inst.subdivisions, 1)
        self.assertEqual(inst.base_vertices, 20)
        self.assertEqual(inst.graph.n, 60)
        self.assertEqual(inst.graph.m, 80)
        self.assertEqual(inst.girth, inst.target)

    def test_bad_arguments(self):
        """Test argument validation."""
        with self.assertRaises(InputError):
            gen_girth_instance("dense", 3)
        with self.assertRaises(InputError):
            gen_girth_instance("epsilon", 40)
        with self.assertRaises(InputError):
            gen_girth_instance("lattice", 40)


class TestEuler(unittest.TestCase):
    """Test cases for the copy-count lower bound."""

    def test_cycle_needs_an_extra_copy(self):
        """Test that a spanning embedding of a long cycle duplicates a vertex."""
        g = cycle_graph(40)
        tree, emb = spanning_clan_embed(g, SpanParams(k=1))
        report = euler_tightness_check(g, tree, emb)
        self.assertEqual(report.euler_characteristic, 1)
        self.assertEqual(report.threshold, 41)
        self.assertEqual(report.girth, 40.0)
        self.assertEqual(report.distortion_threshold, 8.5)
        if report.verdict == "holds":
            self.assertGreaterEqual(report.total_copies, 41)

    def test_tree_input(self):
        """Test that a forest needs exactly one copy per vertex."""
        g = path_graph(6)
        tree = SpanningTree(list(range(6)), g.edges)
        emb = ClanEmbedding({v: [v] for v in range(6)}, {v: v for v in range(6)})
        report = euler_tightness_check(g, tree, emb)
        self.assertEqual(report.euler_characteristic, 0)
        self.assertEqual(report.distortion, 1.0)
        self.assertEqual(report.verdict, "holds")

    def test_violation_is_raised(self):
        """Test a single-copy embedding of a cycle against a claimed girth."""
        g = cycle_graph(40)
        # spanning path 0..39 with one copy per vertex has distortion 39
        tree = SpanningTree(list(range(40)), [(i, i + 1, 1.0) for i in range(39)])
        emb = ClanEmbedding({v: [v] for v in range(40)}, {v: v for v in range(40)})
        report = euler_tightness_check(g, tree, emb)
        self.assertEqual(report.verdict, "not_applicable")
        self.assertEqual(report.distortion, 39.0)
        with self.assertRaises(InequalityViolation):
            euler_tightness_check(g, tree, emb, girth_value=400.0)


if __name__ == "__main__":
    unittest.main()
