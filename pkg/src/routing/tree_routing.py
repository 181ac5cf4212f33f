"""
Exact routing on a tree with a constant number of words per copy.

Copies are numbered in a depth-first order that visits the heavy child
(largest subtree) first. A copy stores its own interval and its heavy child's
interval; a destination label stores its DFS number plus the (parent, child)
pair of every light edge on its root path, of which there are at most log2 n.
"""

import logging
from dataclasses import dataclass

from src.core.hosts import SpanningTree
from src.utils.errors import InputError

logger = logging.getLogger(__name__)

TABLE_WORDS = 7
NO_COPY = -1


@dataclass(frozen=True)
class HeavyPathTree:
    """Rooted view of a tree with heavy children, DFS intervals and depths."""

    root: int
    parent: list[int]
    children: list[list[int]]
    heavy: list[int]
    head: list[int]
    depth: list[float]
    dfs_in: list[int]
    dfs_out: list[int]
    edge_length: list[float]

    @property
    def size(self) -> int:
        return len(self.parent)


def heavy_path_tree(t: SpanningTree) -> HeavyPathTree:
    """
    Root ``t`` at its root copy and compute its heavy-path decomposition.

    Ties between equally large subtrees go to the smaller copy id.
    """
    n = t.size
    if n == 0:
        raise InputError("empty tree")
    parent = [NO_COPY] * n
    edge_length = [0.0] * n
    depth = [0.0] * n
    order = [t.root]
    seen = {t.root}
    for a in order:
        for b, w in t.adjacency[a]:
            if b not in seen:
                seen.add(b)
                parent[b] = a
                edge_length[b] = w
                depth[b] = depth[a] + w
                order.append(b)
    if len(order) != n:
        raise InputError("tree is disconnected")

    children: list[list[int]] = [[] for _ in range(n)]
    for a in order[1:]:
        children[parent[a]].append(a)
    size = [1] * n
    for a in reversed(order[1:]):
        size[parent[a]] += size[a]

    heavy = [NO_COPY] * n
    for a in range(n):
        if children[a]:
            heavy[a] = min(children[a], key=lambda c: (-size[c], c))
            children[a] = [heavy[a], *sorted(c for c in children[a] if c != heavy[a])]

    head = [t.root] * n
    dfs_in = [0] * n
    dfs_out = [0] * n
    counter = 0
    stack: list[tuple[int, bool]] = [(t.root, False)]
    while stack:
        a, done = stack.pop()
        if done:
            dfs_out[a] = counter - 1
            continue
        dfs_in[a] = counter
        counter += 1
        stack.append((a, True))
        for c in reversed(children[a]):
            head[c] = head[a] if c == heavy[a] else c
            stack.append((c, False))

    return HeavyPathTree(
        root=t.root,
        parent=parent,
        children=children,
        heavy=heavy,
        head=head,
        depth=depth,
        dfs_in=dfs_in,
        dfs_out=dfs_out,
        edge_length=edge_length,
    )


@dataclass(frozen=True)
class RoutingTable:
    """Seven words: id, interval, parent, heavy child and its interval."""

    copy: int
    dfs_in: int
    dfs_out: int
    parent: int
    heavy: int
    heavy_in: int
    heavy_out: int

    @property
    def words(self) -> int:
        return TABLE_WORDS


@dataclass(frozen=True)
class RoutingLabel:
    """DFS number plus the light edges on the root path."""

    dfs_in: int
    light: tuple[tuple[int, int], ...]

    @property
    def words(self) -> int:
        return 1 + 2 * len(self.light)


@dataclass(frozen=True)
class TreeRoutingState:
    tables: list[RoutingTable]
    labels: list[RoutingLabel]
    lengths: dict[tuple[int, int], float]

    def next_hop(self, copy: int, dest: RoutingLabel) -> int | None:
        """Neighbor of ``copy`` toward ``dest``, or None when already there."""
        table = self.tables[copy]
        if dest.dfs_in == table.dfs_in:
            return None
        if not table.dfs_in < dest.dfs_in <= table.dfs_out:
            return table.parent
        if table.heavy_in <= dest.dfs_in <= table.heavy_out:
            return table.heavy
        for parent, child in dest.light:
            if parent == copy:
                return child
        raise InputError(f"label {dest} has no light edge below copy {copy}")

    def length(self, a: int, b: int) -> float:
        return self.lengths[(a, b) if a < b else (b, a)]


def build_tree_routing(t: SpanningTree) -> TreeRoutingState:
    """Routing tables and labels for every copy of ``t``."""
    hp = heavy_path_tree(t)
    tables = []
    labels = []
    for a in range(hp.size):
        h = hp.heavy[a]
        tables.append(
            RoutingTable(
                copy=a,
                dfs_in=hp.dfs_in[a],
                dfs_out=hp.dfs_out[a],
                parent=hp.parent[a],
                heavy=h,
                heavy_in=hp.dfs_in[h] if h != NO_COPY else NO_COPY,
                heavy_out=hp.dfs_out[h] if h != NO_COPY else NO_COPY - 1,
            )
        )
        light = []
        b = a
        while b != hp.root:
            p = hp.parent[b]
            if hp.heavy[p] != b:
                light.append((p, b))
            b = p
        labels.append(RoutingLabel(dfs_in=hp.dfs_in[a], light=tuple(reversed(light))))
    lengths = {(min(a, b), max(a, b)): w for a, b, w in t.edges}
    logger.debug(
        f"Tree routing over {hp.size} copies, max label words "
        f"{max(label.words for label in labels)}"
    )
    return TreeRoutingState(tables=tables, labels=labels, lengths=lengths)
