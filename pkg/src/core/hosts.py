"""
Host structures of clan embeddings: ultrametrics, spanning trees, and the
clan/chief maps that tie source points to host copies.
"""

import logging
from collections.abc import Iterable, Mapping

import numpy as np

from src.core.graph import WeightedGraph
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


class Ultrametric:
    """
    Rooted tree with node labels; leaves are copies of metric points.

    Args:
        parent: Parent id per node, -1 for the root.
        label: Label per node (0 exactly at leaves).
        owner: Owning point per node, -1 for internal nodes.
    """

    def __init__(self, parent: list[int], label: list[float], owner: list[int]) -> None:
        if not (len(parent) == len(label) == len(owner)):
            raise InputError("ultrametric node arrays differ in length")
        self.parent = [int(p) for p in parent]
        self.label = [float(x) for x in label]
        self.owner = [int(o) for o in owner]
        self.children: list[list[int]] = [[] for _ in self.parent]
        roots = []
        for node, p in enumerate(self.parent):
            if p == -1:
                roots.append(node)
            elif 0 <= p < len(self.parent):
                self.children[p].append(node)
            else:
                raise InputError(f"node {node} has unknown parent {p}")
        if len(roots) != 1:
            raise InputError(f"ultrametric needs exactly one root, found {len(roots)}")
        self.root = roots[0]
        self.depth = self._depths()

    def _depths(self) -> list[int]:
        depth = [-1] * len(self.parent)
        depth[self.root] = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            for child in self.children[node]:
                depth[child] = depth[node] + 1
                stack.append(child)
        if min(depth) < 0:
            raise InputError("ultrametric nodes unreachable from the root (cycle)")
        return depth

    @property
    def size(self) -> int:
        return len(self.parent)

    def is_leaf(self, node: int) -> bool:
        return not self.children[node]

    def leaves(self) -> list[int]:
        return [node for node in range(self.size) if not self.children[node]]

    def lca(self, a: int, b: int) -> int:
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        while a != b:
            a, b = self.parent[a], self.parent[b]
        return a

    def distance(self, a: int, b: int) -> float:
        """Label of the least common ancestor of two leaves."""
        return self.label[self.lca(a, b)]

    def validate(self) -> None:
        """Check label monotonicity, zero labels at leaves and leaf ownership."""
        for node in range(self.size):
            leaf = self.is_leaf(node)
            if leaf and (self.label[node] != 0 or self.owner[node] < 0):
                raise InputError(f"leaf {node} must have label 0 and an owner")
            if not leaf and (self.label[node] <= 0 or self.owner[node] >= 0):
                raise InputError(f"internal node {node} must have a positive label and no owner")
            p = self.parent[node]
            if p >= 0 and self.label[p] < self.label[node]:
                raise InputError(f"label increases from node {p} to child {node}")

    def leaf_distances(self, copies: list[int]) -> np.ndarray:
        """
        Distance matrix between the given leaves, derived from the tree alone.

        Each internal node assigns its label to every pair of leaves that sit
        below two different children.
        """
        index = {c: i for i, c in enumerate(copies)}
        out = np.zeros((len(copies), len(copies)))
        below: dict[int, list[int]] = {}
        order = sorted(range(self.size), key=lambda node: -self.depth[node])
        for node in order:
            if self.is_leaf(node):
                below[node] = [index[node]] if node in index else []
                continue
            groups = [below.pop(child) for child in self.children[node]]
            for i, left in enumerate(groups):
                for right in groups[i + 1 :]:
                    if left and right:
                        out[np.ix_(left, right)] = self.label[node]
                        out[np.ix_(right, left)] = self.label[node]
            below[node] = [i for group in groups for i in group]
        return out


class UltrametricBuilder:
    """Accumulates nodes bottom-up; ids follow creation order."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.label: list[float] = []
        self.owner: list[int] = []

    def add_leaf(self, point: int) -> int:
        self.parent.append(-1)
        self.label.append(0.0)
        self.owner.append(int(point))
        return len(self.parent) - 1

    def add_internal(self, label: float, children: Iterable[int]) -> int:
        node = len(self.parent)
        self.parent.append(-1)
        self.label.append(float(label))
        self.owner.append(-1)
        for child in children:
            self.parent[child] = node
        return node

    def build(self) -> Ultrametric:
        return Ultrametric(self.parent, self.label, self.owner)


def ultra_distance(u: Ultrametric, a: int, b: int, copy_a: int, copy_b: int) -> float:
    """d_U between copy ``copy_a`` of point ``a`` and copy ``copy_b`` of point ``b``."""
    for point, copy in ((a, copy_a), (b, copy_b)):
        if not 0 <= copy < u.size or not u.is_leaf(copy):
            raise InputError(f"unknown copy id {copy}")
        if u.owner[copy] != point:
            raise InputError(f"copy {copy} is not owned by point {point}")
    return u.distance(copy_a, copy_b)


class SpanningTree:
    """
    Tree whose vertices are copies of graph vertices.

    Args:
        orig: Original vertex id per copy; copy ids are ``0..len(orig)-1``.
        edges: Tree edges as (copy, copy, length).
        root: Optional distinguished root copy.
    """

    def __init__(
        self, orig: list[int], edges: list[tuple[int, int, float]], root: int | None = None
    ) -> None:
        self.orig = [int(o) for o in orig]
        self.edges = [(int(a), int(b), float(w)) for a, b, w in edges]
        self.root = 0 if root is None else int(root)
        self.adjacency: list[list[tuple[int, float]]] = [[] for _ in self.orig]
        for a, b, w in self.edges:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise InputError(f"tree edge ({a}, {b}) references an unknown copy")
            self.adjacency[a].append((b, w))
            self.adjacency[b].append((a, w))
        for neighbors in self.adjacency:
            neighbors.sort()

    @property
    def size(self) -> int:
        return len(self.orig)

    def distances_from(self, source: int) -> np.ndarray:
        """Tree distances from one copy to all copies (inf when disconnected)."""
        dist = np.full(self.size, np.inf)
        dist[source] = 0.0
        stack = [source]
        while stack:
            a = stack.pop()
            for b, w in self.adjacency[a]:
                if dist[b] == np.inf:
                    dist[b] = dist[a] + w
                    stack.append(b)
        return dist

    def distance_matrix(self) -> np.ndarray:
        return np.vstack([self.distances_from(c) for c in range(self.size)])

    def path(self, a: int, b: int) -> list[int]:
        """Copies on the unique tree path from ``a`` to ``b``."""
        parent = {a: -1}
        stack = [a]
        while stack:
            x = stack.pop()
            for y, _ in self.adjacency[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        if b not in parent:
            raise InputError(f"copies {a} and {b} are not connected")
        walk = [b]
        while walk[-1] != a:
            walk.append(parent[walk[-1]])
        walk.reverse()
        return walk

    def radius(self) -> float:
        return float(self.distances_from(self.root).max())

    def validate(self, g: WeightedGraph | None = None) -> None:
        """Check the tree is acyclic and connected, and spanning for ``g``."""
        if len(self.edges) != self.size - 1:
            raise InputError(f"tree over {self.size} copies has {len(self.edges)} edges")
        if self.size and np.isinf(self.distances_from(0)).any():
            raise InputError("tree is disconnected")
        if g is None:
            return
        for a, b, w in self.edges:
            u, v = self.orig[a], self.orig[b]
            if not g.has_edge(u, v) or g.weight(u, v) != w:
                raise InputError(
                    f"tree edge ({a}, {b}) does not project to graph edge ({u}, {v}) of length {w}"
                )


class ClanEmbedding:
    """
    One-to-many map from points to disjoint copy sets plus a chief per point.

    Args:
        clans: Copies of each point.
        chief: The designated copy of each point.
    """

    def __init__(self, clans: Mapping[int, list[int]], chief: Mapping[int, int]) -> None:
        self.clans = {int(x): sorted(int(c) for c in copies) for x, copies in sorted(clans.items())}
        self.chief = {int(x): int(c) for x, c in sorted(chief.items())}

    @property
    def points(self) -> list[int]:
        return list(self.clans)

    def size(self, x: int) -> int:
        return len(self.clans[x])

    def sizes(self, n: int) -> np.ndarray:
        """Clan sizes indexed by point id ``0..n-1`` (0 for absent points)."""
        out = np.zeros(n)
        for x, copies in self.clans.items():
            out[x] = len(copies)
        return out

    @property
    def total_copies(self) -> int:
        return sum(len(copies) for copies in self.clans.values())

    def owner_map(self) -> dict[int, int]:
        return {c: x for x, copies in self.clans.items() for c in copies}

    def validate(self, host_copies: Iterable[int], require_cover: bool = False) -> None:
        """
        Check nonempty disjoint clans, chiefs inside clans, and copies in the host.

        Args:
            host_copies: Copy ids the host provides (leaves or tree vertices).
            require_cover: Demand that the clans use every host copy.
        """
        available = set(host_copies)
        seen: set[int] = set()
        for x, copies in self.clans.items():
            if not copies:
                raise InputError(f"point {x} has an empty clan")
            for c in copies:
                if c in seen:
                    raise InputError(f"copy {c} belongs to two clans")
                if c not in available:
                    raise InputError(f"copy {c} of point {x} is not a host copy")
                seen.add(c)
            if self.chief.get(x) not in copies:
                raise InputError(f"chief of point {x} is not in its clan")
        if set(self.chief) != set(self.clans):
            raise InputError("chief map and clan map cover different points")
        if require_cover and seen != available:
            raise InputError(f"{len(available - seen)} host copies have no owner")
