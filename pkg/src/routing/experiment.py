"""
Routing experiment: sample spanning clan embeddings, build the scheme, route
pairs and aggregate stretch and size statistics.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, Field

from src.core.checks import assert_le, within
from src.core.graph import WeightedGraph, all_pairs_distances
from src.embedding.params import SpanParams, spanning_distortion_bound
from src.embedding.spanning import spanning_clan_embed
from src.routing.labels import LabelMode, build_distance_labels
from src.routing.scheme import Packet, build_node_bundles, route
from src.routing.tree_routing import TABLE_WORDS, build_tree_routing
from src.utils.errors import InequalityViolation, InputError
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)


class Summary(BaseModel):
    mean: float
    max: float
    p99: float | None = None


class RoutingReport(BaseModel):
    """Aggregated routing measurements over all samples."""

    stretch: Summary
    table_words: Summary
    label_words_max: int
    header_words: int
    clan_mean: float
    samples: int = Field(ge=1)
    pairs_routed: int
    per_copy_words: int
    labels: str
    stretch_bound: float
    roots: list[int]


def _pairs(n: int, pairs: int | None, rng: np.random.Generator) -> list[tuple[int, int]]:
    if pairs is None:
        return [(u, v) for u in range(n) for v in range(n) if u != v]
    src = rng.integers(n, size=pairs)
    shift = rng.integers(1, n, size=pairs)
    return [(int(u), int((u + s) % n)) for u, s in zip(src, shift, strict=True)]


def routing_experiment(
    g: WeightedGraph,
    params: SpanParams,
    samples: int = 1,
    seed: int = 0,
    labels: LabelMode = "exact",
    pairs: int | None = None,
    threads: int | None = None,
) -> RoutingReport:
    """
    Route pairs over ``samples`` independent spanning clan embeddings.

    Each sample draws its root vertex from the seeded generator. Every packet
    is checked to follow the tree path from its start copy to the
    destination's chief, and its stretch is asserted against twice (approx2)
    or once (exact) the spanning distortion bound.

    Args:
        g: Connected graph with at least two vertices.
        params: Spanning embedding parameters.
        samples: Number of independent embeddings.
        seed: Root seed.
        labels: Distance label mode.
        pairs: Number of sampled ordered pairs per embedding; all pairs when None.
        threads: Worker threads for pair routing.
    """
    if g.n < 2:
        raise InputError("routing needs at least two vertices")
    if samples < 1:
        raise InputError(f"samples must be positive, got {samples}")
    if pairs is not None and pairs < 1:
        raise InputError(f"pairs must be positive, got {pairs}")

    dist = all_pairs_distances(g)
    k_int = params.internal_k(g.n)
    scale = 1 if labels == "exact" else 2
    bound = scale * spanning_distortion_bound(k_int, 2 * g.n)

    stretches: list[float] = []
    table_words: list[int] = []
    clan_sizes: list[int] = []
    label_words_max = 0
    header_words = 0
    per_copy = 0
    roots = []

    for s in range(samples):
        rng = make_rng(seed, s)
        root = int(rng.integers(g.n))
        roots.append(root)
        tree, emb = spanning_clan_embed(g, params, root=root)
        routing = build_tree_routing(tree)
        dl = build_distance_labels(tree, labels)
        bundles = build_node_bundles(tree, emb, routing, dl)
        per_copy = TABLE_WORDS + dl.label_words

        for v, bundle in bundles.items():
            size = len(emb.clans[v])
            if bundle.table_words != size * per_copy:
                raise InequalityViolation(
                    "table_accounting", bundle.table_words, size * per_copy, f"vertex={v}"
                )
            table_words.append(bundle.table_words)
            clan_sizes.append(size)
            label_words_max = max(label_words_max, bundle.label_words)

        jobs = _pairs(g.n, pairs, rng)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            packets: list[Packet] = list(
                pool.map(lambda p: route(bundles, routing, dl, p[0], p[1]), jobs)
            )

        for (u, v), packet in zip(jobs, packets, strict=True):
            chief = emb.chief[v]
            tree_d = float(tree.distances_from(packet.start)[chief])
            if packet.current != chief or not within(abs(packet.length - tree_d), 0.0):
                raise InequalityViolation(
                    "delivery", packet.length, tree_d, f"pair=({u}, {v}) sample={s}"
                )
            stretch = packet.length / float(dist[u, v])
            assert_le("routing_stretch", stretch, bound, f"pair=({u}, {v}) sample={s}")
            stretches.append(stretch)
            header_words = max(header_words, packet.header_words)
        logger.info(
            f"Routing sample {s + 1}/{samples}: root={root}, {len(jobs)} pairs, "
            f"copies={emb.total_copies}"
        )

    arr = np.asarray(stretches)
    words = np.asarray(table_words, dtype=float)
    return RoutingReport(
        stretch=Summary(
            mean=float(arr.mean()), max=float(arr.max()), p99=float(np.percentile(arr, 99))
        ),
        table_words=Summary(mean=float(words.mean()), max=float(words.max())),
        label_words_max=label_words_max,
        header_words=header_words,
        clan_mean=float(np.mean(clan_sizes)),
        samples=samples,
        pairs_routed=len(stretches),
        per_copy_words=per_copy,
        labels=labels,
        stretch_bound=bound,
        roots=roots,
    )
