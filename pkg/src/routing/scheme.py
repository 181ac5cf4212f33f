"""
Compact routing on a graph through a spanning clan embedding.

Every vertex is addressed by its chief's tree-routing label and distance
label. Its table concatenates, over all of its copies, the copy's routing
table and distance label. A packet leaves from the source copy closest to the
destination's chief by estimated distance and then follows the tree.
"""

import logging
from dataclasses import dataclass, field

from src.core.hosts import ClanEmbedding, SpanningTree
from src.routing.labels import DistanceLabel, DistanceLabels
from src.routing.tree_routing import RoutingLabel, RoutingTable, TreeRoutingState
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NodeBundle:
    """Label and routing table of one graph vertex."""

    vertex: int
    chief: int
    routing_label: RoutingLabel
    distance_label: DistanceLabel
    table: list[tuple[RoutingTable, DistanceLabel]]
    label_words: int
    table_words: int


@dataclass
class Packet:
    """Header plus the hop log of a delivered packet."""

    destination: int
    dest_label: RoutingLabel
    start: int
    current: int
    hops: list[tuple[int, int, float]] = field(default_factory=list)
    header_words: int = 0

    @property
    def length(self) -> float:
        return sum(w for _, _, w in self.hops)


def build_node_bundles(
    t: SpanningTree,
    emb: ClanEmbedding,
    routing: TreeRoutingState,
    labels: DistanceLabels,
) -> dict[int, NodeBundle]:
    """Assemble every vertex's label (from its chief) and table (from all copies)."""
    per_copy = routing.tables[0].words + labels.label_words if routing.tables else 0
    bundles = {}
    for v, copies in emb.clans.items():
        chief = emb.chief[v]
        for c in copies:
            if not 0 <= c < t.size:
                raise InputError(f"copy {c} of vertex {v} is not a tree vertex")
        routing_label = routing.labels[chief]
        bundles[v] = NodeBundle(
            vertex=v,
            chief=chief,
            routing_label=routing_label,
            distance_label=labels.labels[chief],
            table=[(routing.tables[c], labels.labels[c]) for c in copies],
            label_words=routing_label.words + labels.label_words,
            table_words=len(copies) * per_copy,
        )
    return bundles


def route(
    bundles: dict[int, NodeBundle],
    routing: TreeRoutingState,
    labels: DistanceLabels,
    src: int,
    dst: int,
) -> Packet:
    """
    Deliver a packet from ``src`` to the chief of ``dst``.

    The source picks the copy minimizing the estimated distance to the
    destination's distance label (ties to the smallest copy id) and the tree
    routing tables forward it one edge per step.
    """
    if src not in bundles or dst not in bundles:
        raise InputError(f"unknown vertex in route {src} -> {dst}")
    if src == dst:
        raise InputError("source and destination must differ")
    target = bundles[dst]
    _, start = min(
        (labels.estimate(label, target.distance_label), table.copy)
        for table, label in bundles[src].table
    )

    packet = Packet(
        destination=dst,
        dest_label=target.routing_label,
        start=start,
        current=start,
        header_words=target.label_words + 1,
    )
    for _ in range(len(routing.tables)):
        nxt = routing.next_hop(packet.current, packet.dest_label)
        if nxt is None:
            return packet
        packet.hops.append((packet.current, nxt, routing.length(packet.current, nxt)))
        packet.current = nxt
    raise InputError(f"packet {src} -> {dst} did not reach copy {target.chief}")
