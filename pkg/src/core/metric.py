"""
Finite metric spaces with subset views: balls, diameters and the mu-star
quantity that drives the ball-growing partitions.
"""

import logging
import math
from collections.abc import Iterable
from typing import Literal

import numpy as np

from src.core.checks import REL_TOL
from src.core.graph import WeightedGraph, all_pairs_distances, dijkstra
from src.core.measure import Measure
from src.utils.errors import InputError

logger = logging.getLogger(__name__)

PointSet = np.ndarray


def as_points(subset: Iterable[int] | np.ndarray) -> PointSet:
    """Normalize a point collection to a sorted unique int array."""
    if isinstance(subset, np.ndarray):
        return np.unique(subset.astype(np.int64))
    return np.unique(np.fromiter(subset, dtype=np.int64))


class MetricSpace:
    """
    Dense pairwise-distance table over points ``0..n-1``.

    Args:
        dist: Square matrix of pairwise lengths.
        validate: Check symmetry, zero diagonal, positivity and the triangle
            inequality (cubic, use on small inputs).
    """

    def __init__(self, dist: np.ndarray, validate: bool = False) -> None:
        self.dist = np.asarray(dist, dtype=float)
        if self.dist.ndim != 2 or self.dist.shape[0] != self.dist.shape[1]:
            raise InputError(f"distance table must be square, got shape {self.dist.shape}")
        self.n = int(self.dist.shape[0])
        if validate:
            self.validate()

    @classmethod
    def from_graph(cls, g: WeightedGraph) -> "MetricSpace":
        return cls(all_pairs_distances(g))

    def validate(self) -> None:
        d = self.dist
        if not np.all(np.isfinite(d)):
            raise InputError("distance table has non-finite entries")
        if not np.array_equal(d, d.T):
            raise InputError("distance table is not symmetric")
        if np.any(np.diag(d) != 0):
            raise InputError("distance table has a nonzero diagonal")
        off = d[~np.eye(self.n, dtype=bool)]
        if np.any(off <= 0):
            raise InputError("distance table has a nonpositive off-diagonal entry")
        for z in range(self.n):
            through = d[:, [z]] + d[[z], :]
            if np.any(d > through * (1 + REL_TOL)):
                raise InputError(f"triangle inequality fails through point {z}")

    def subspace(self, points: Iterable[int]) -> "MetricSpace":
        """Metric on ``points`` re-indexed as ``0..len(points)-1``."""
        idx = as_points(points)
        return MetricSpace(self.dist[np.ix_(idx, idx)])

    def points(self) -> PointSet:
        return np.arange(self.n, dtype=np.int64)


def shortest_path_metric(g: WeightedGraph) -> MetricSpace:
    """Exact shortest-path metric of a connected graph."""
    logger.debug(f"Computing all-pairs shortest paths for n={g.n}, m={g.m}")
    return MetricSpace.from_graph(g)


def ball(m: MetricSpace, subset: Iterable[int], center: int, r: float) -> PointSet:
    """Return {y in subset : dist(center, y) <= r}."""
    pts = as_points(subset)
    if not np.any(pts == center):
        raise InputError(f"ball center {center} is outside the subset")
    if r < 0:
        raise InputError(f"ball radius must be nonnegative, got {r}")
    return pts[m.dist[center, pts] <= r]


def diameter(
    m: MetricSpace,
    subset: Iterable[int],
    mode: Literal["weak", "strong"] = "weak",
    g: WeightedGraph | None = None,
) -> float:
    """
    Diameter of a subset.

    Weak mode uses ambient distances. Strong mode uses shortest paths inside
    the induced subgraph of ``g`` and returns ``math.inf`` when that subgraph
    is disconnected.
    """
    pts = as_points(subset)
    if pts.size == 0:
        raise InputError("diameter of an empty subset")
    if pts.size == 1:
        return 0.0
    if mode == "weak":
        return float(m.dist[np.ix_(pts, pts)].max())
    if g is None:
        raise InputError("strong diameter requires the graph")

    members = frozenset(pts.tolist())
    worst = 0.0
    for s in pts.tolist():
        dist, _ = dijkstra(g, s, members)
        if len(dist) < len(members):
            return math.inf
        worst = max(worst, max(dist.values()))
    return worst


def mu_star(m: MetricSpace, subset: Iterable[int], mu: Measure) -> float:
    """max over x in subset of mu(B_subset(x, diam(subset)/4)), weak diameter."""
    pts = as_points(subset)
    if pts.size == 0:
        raise InputError("mu_star of an empty subset")
    block = m.dist[np.ix_(pts, pts)]
    quarter = block.max() / 4
    weights = mu.array[pts]
    masses = (block <= quarter).astype(float) @ weights
    return float(masses.max())
