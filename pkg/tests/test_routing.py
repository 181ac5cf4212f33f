"""
Tests for tree routing, distance labels and the compact routing scheme.
"""

import math
import unittest

from src.bench.instances import cycle_graph, grid_graph, random_connected_graph
from src.core.hosts import SpanningTree
from src.embedding.params import SpanParams
from src.embedding.spanning import spanning_clan_embed
from src.routing.experiment import routing_experiment
from src.routing.labels import build_distance_labels, gap_value, quantize_gap
from src.routing.scheme import build_node_bundles, route
from src.routing.tree_routing import TABLE_WORDS, build_tree_routing, heavy_path_tree
from src.utils.errors import InputError


def _walk(routing, a, b):
    hops = 0
    length = 0.0
    current = a
    while True:
        nxt = routing.next_hop(current, routing.labels[b])
        if nxt is None:
            return current, hops, length
        length += routing.length(current, nxt)
        current = nxt
        hops += 1


class TestTreeRouting(unittest.TestCase):
    """Test cases for heavy-path interval routing."""

    def setUp(self):
        """Star with center 0 and five leaves, plus a random weighted tree."""
        self.star = SpanningTree(list(range(6)), [(0, i, 1.0) for i in range(1, 6)], root=0)
        g = random_connected_graph(40, seed=12, extra=0.0, max_weight=3)
        self.tree = SpanningTree(list(range(40)), g.edges, root=5)

    def test_heavy_path_tree(self):
        """Test DFS intervals and heavy children on the star."""
        hp = heavy_path_tree(self.star)
        self.assertEqual(hp.heavy[0], 1)
        self.assertEqual(hp.dfs_in, [0, 1, 2, 3, 4, 5])
        self.assertEqual(hp.dfs_out[0], 5)
        self.assertEqual(hp.head[1], 0)
        self.assertEqual(hp.head[3], 3)

    def test_star_route_takes_two_hops(self):
        """Test leaf-to-leaf delivery through the center."""
        routing = build_tree_routing(self.star)
        end, hops, length = _walk(routing, 2, 4)
        self.assertEqual((end, hops, length), (4, 2, 2.0))
        self.assertEqual(routing.labels[4].light, ((0, 4),))
        self.assertEqual(routing.labels[1].light, ())
        self.assertIsNone(routing.next_hop(3, routing.labels[3]))

    def test_all_pairs_follow_tree_paths(self):
        """Test exact delivery along the unique tree path for every pair."""
        routing = build_tree_routing(self.tree)
        for a in range(0, 40, 3):
            dist = self.tree.distances_from(a)
            for b in range(40):
                end, hops, length = _walk(routing, a, b)
                self.assertEqual(end, b)
                self.assertEqual(hops, len(self.tree.path(a, b)) - 1)
                self.assertAlmostEqual(length, dist[b])

    def test_table_and_label_size(self):
        """Test constant tables and logarithmic labels."""
        routing = build_tree_routing(self.tree)
        self.assertTrue(all(table.words == TABLE_WORDS for table in routing.tables))
        bound = 1 + 2 * math.log2(40)
        self.assertTrue(all(label.words <= bound for label in routing.labels))


class TestDistanceLabels(unittest.TestCase):
    """Test cases for exact and approximate distance labels."""

    def setUp(self):
        """Random weighted tree and its distance matrix."""
        g = random_connected_graph(35, seed=21, extra=0.0, max_weight=7)
        self.tree = SpanningTree(list(range(35)), g.edges, root=0)
        self.dist = self.tree.distance_matrix()

    def test_quantize_gap(self):
        """Test rounding up to half-integer powers of two."""
        self.assertIsNone(quantize_gap(0.0))
        self.assertEqual(quantize_gap(1.0), 0)
        self.assertEqual(quantize_gap(1.5), 2)
        self.assertEqual(quantize_gap(2.0), 2)
        self.assertEqual(quantize_gap(0.5), -2)
        self.assertEqual(gap_value(None), 0.0)
        self.assertAlmostEqual(gap_value(3), 2**1.5)

    def test_exact_labels(self):
        """Test that exact labels recover tree distances."""
        labels = build_distance_labels(self.tree, "exact")
        self.assertEqual(labels.stretch, 1)
        self.assertEqual(labels.label_words, 1 + 2 * labels.width)
        for a in range(35):
            for b in range(35):
                estimate = labels.estimate(labels.labels[a], labels.labels[b])
                self.assertAlmostEqual(estimate, self.dist[a, b])

    def test_approx_labels_within_two(self):
        """Test that approx2 estimates lie between d and 2d."""
        labels = build_distance_labels(self.tree, "approx2")
        self.assertEqual(labels.stretch, 2)
        for a in range(35):
            for b in range(35):
                estimate = labels.estimate(labels.labels[a], labels.labels[b])
                self.assertGreaterEqual(estimate, self.dist[a, b] - 1e-9)
                self.assertLessEqual(estimate, 2 * self.dist[a, b] + 1e-9)

    def test_unknown_mode(self):
        """Test mode validation."""
        with self.assertRaises(InputError):
            build_distance_labels(self.tree, "fuzzy")


class TestScheme(unittest.TestCase):
    """Test cases for node bundles and packet delivery."""

    def setUp(self):
        """Spanning clan embedding of a 4x4 grid with k=1."""
        self.g = grid_graph(4, 4)
        self.tree, self.emb = spanning_clan_embed(self.g, SpanParams(k=1))
        self.routing = build_tree_routing(self.tree)
        self.labels = build_distance_labels(self.tree, "exact")
        self.bundles = build_node_bundles(self.tree, self.emb, self.routing, self.labels)

    def test_bundle_accounting(self):
        """Test table words per copy and the chief's label."""
        per_copy = TABLE_WORDS + self.labels.label_words
        for v, bundle in self.bundles.items():
            self.assertEqual(bundle.table_words, len(self.emb.clans[v]) * per_copy)
            self.assertEqual(bundle.chief, self.emb.chief[v])
            self.assertEqual(len(bundle.table), len(self.emb.clans[v]))

    def test_every_pair_is_delivered(self):
        """Test delivery to the destination's chief along the tree."""
        for u in range(16):
            for v in range(16):
                if u == v:
                    continue
                packet = route(self.bundles, self.routing, self.labels, u, v)
                self.assertEqual(packet.current, self.emb.chief[v])
                self.assertIn(packet.start, self.emb.clans[u])
                expected = self.tree.distances_from(packet.start)[self.emb.chief[v]]
                self.assertAlmostEqual(packet.length, expected)
                self.assertEqual(packet.header_words, self.bundles[v].label_words + 1)

    def test_route_rejects_bad_pairs(self):
        """Test source/destination validation."""
        with self.assertRaises(InputError):
            route(self.bundles, self.routing, self.labels, 3, 3)
        with self.assertRaises(InputError):
            route(self.bundles, self.routing, self.labels, 3, 99)


class TestRoutingExperiment(unittest.TestCase):
    """Test cases for the routing simulation driver."""

    def test_all_pairs(self):
        """Test an all-pairs run over two samples."""
        g = grid_graph(3, 4)
        report = routing_experiment(g, SpanParams(k=1), samples=2, seed=4, threads=2)
        self.assertEqual(report.pairs_routed, 2 * 12 * 11)
        self.assertEqual(len(report.roots), 2)
        self.assertGreaterEqual(report.stretch.mean, 1.0 - 1e-9)
        self.assertLessEqual(report.stretch.max, report.stretch_bound)
        self.assertEqual(report.labels, "exact")

    def test_sampled_pairs_with_approx_labels(self):
        """Test sampled pairs, approx2 labels and reproducibility."""
        g = cycle_graph(10)
        params = SpanParams(epsilon=1.0)
        first = routing_experiment(g, params, seed=9, labels="approx2", pairs=50)
        second = routing_experiment(g, params, seed=9, labels="approx2", pairs=50)
        self.assertEqual(first.pairs_routed, 50)
        self.assertEqual(first, second)
        self.assertGreater(first.per_copy_words, TABLE_WORDS)
        self.assertLessEqual(first.clan_mean, 2.0 + 1e-9)

    def test_rejects_bad_arguments(self):
        """Test argument validation."""
        g = cycle_graph(5)
        with self.assertRaises(InputError):
            routing_experiment(g, SpanParams(k=1), samples=0)
        with self.assertRaises(InputError):
            routing_experiment(g, SpanParams(k=1), pairs=0)


if __name__ == "__main__":
    unittest.main()
