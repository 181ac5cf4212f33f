"""
Petal decomposition of a cluster around a center and a target.

A petal W_r is a union of cone-metric balls strung along the shortest path
from the center x0 to a target t. For a vertex u the smallest r with u in W_r
is its entry value

    entry(u) = min over p on P(x0, t) of d(p, t) + 2 * (d(x0, p) + d(p, u) - d(x0, u)),

so W_r = {u : entry(u) <= r}. Every vertex of the path enters at d(p, t), the
center enters last (at d(x0, t)) and the target enters at 0.
"""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from src.core.checks import assert_le, within
from src.core.graph import Edge, WeightedGraph, dijkstra, edge_key, path_to
from src.core.measure import Measure
from src.embedding.params import petal_levels
from src.utils.errors import InequalityViolation, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClusterState:
    """
    A cluster Y with center x0, target t, radius budget and weight overlay.

    Distances are shortest paths inside G[Y] with the overlay applied.
    """

    graph: WeightedGraph
    vertices: frozenset[int]
    center: int
    target: int
    delta_in: float
    local_weights: Mapping[Edge, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.center not in self.vertices or self.target not in self.vertices:
            raise InputError("cluster center and target must belong to the cluster")
        object.__setattr__(self, "_sources", {})

    def distances_from(self, source: int) -> dict[int, float]:
        """Distances from ``source`` inside the cluster (cached per source)."""
        cache: dict[int, dict[int, float]] = self.__dict__["_sources"]
        if source not in cache:
            if source not in self.vertices:
                raise InputError(f"vertex {source} outside cluster")
            cache[source], _ = dijkstra(self.graph, source, self.vertices, self.local_weights)
        return cache[source]

    def distance(self, u: int, v: int) -> float:
        if v not in self.vertices:
            raise InputError(f"vertex {v} outside cluster")
        return self.distances_from(u).get(v, math.inf)

    @cached_property
    def center_tree(self) -> tuple[dict[int, float], dict[int, int]]:
        """Tie-broken shortest-path tree from the center."""
        return dijkstra(self.graph, self.center, self.vertices, self.local_weights)

    @cached_property
    def target_path(self) -> list[int]:
        """The tie-broken shortest path from the center to the target."""
        _, pred = self.center_tree
        if self.target not in pred:
            raise InputError(f"target {self.target} unreachable from center {self.center}")
        return path_to(pred, self.target)

    @cached_property
    def radius(self) -> float:
        """Largest distance from the center, inf if G[Y] is disconnected."""
        dist, _ = self.center_tree
        if len(dist) < len(self.vertices):
            return math.inf
        return max(dist.values())

    @cached_property
    def entries(self) -> dict[int, float]:
        """Entry value of every vertex of the cluster."""
        from_center, _ = self.center_tree
        out = {u: math.inf for u in self.vertices}
        for p in self.target_path:
            from_p = self.distances_from(p)
            to_target = from_p[self.target]
            base = from_center[p]
            for u, d_pu in from_p.items():
                value = to_target + 2 * (base + d_pu - from_center[u])
                if value < out[u]:
                    out[u] = value
        return out


@dataclass(frozen=True)
class PetalTriple:
    """Nested petals W_{r-h} <= W_r <= W_{r+h} with h = R/(4Lk)."""

    inner: frozenset[int]
    mid: frozenset[int]
    outer: frozenset[int]
    radius: float
    connector: tuple[int, int]
    target: int
    window: tuple[float, float]
    forward: bool
    lo: float
    hi: float


@dataclass(frozen=True)
class Petal:
    """A carved petal plus the state its own recursion starts from."""

    triple: PetalTriple
    delta: float
    overlay: Mapping[Edge, float]
    special: bool
    outer_radius: float

    @property
    def center(self) -> int:
        return self.triple.connector[0]


@dataclass(frozen=True)
class PetalDecomposition:
    """Petals in carving order, the central cluster and the shrinking Y_j."""

    petals: list[Petal]
    central: frozenset[int]
    central_target: int
    remaining: list[frozenset[int]]
    remaining_radii: list[float]


def cone_distance(state: ClusterState, x: int, y: int, u: int, v: int) -> float:
    """|(d(x,u) - d(y,u)) - (d(x,v) - d(y,v))| inside the cluster."""
    for vertex in (x, y, u, v):
        if vertex not in state.vertices:
            raise InputError(f"vertex {vertex} outside cluster")
    return abs(
        (state.distance(x, u) - state.distance(y, u))
        - (state.distance(x, v) - state.distance(y, v))
    )


def petal(state: ClusterState, r: float) -> frozenset[int]:
    """W_r: vertices whose entry value is at most r."""
    if r < 0:
        raise InputError(f"petal radius must be nonnegative, got {r}")
    return frozenset(u for u, e in state.entries.items() if e <= r)


def _connector(state: ClusterState, inner: frozenset[int]) -> tuple[int, int]:
    path = state.target_path
    for i, vertex in enumerate(path):
        if vertex in inner:
            return vertex, path[i - 1]
    raise InequalityViolation("petal_contains_target", 0.0, 1.0, f"target={state.target}")


def create_petal(
    state: ClusterState, mu: Measure, lo: float, hi: float, k: int
) -> PetalTriple:
    """
    Carve one petal with radius in [lo, hi].

    When w(mid) <= mu(Y)/2 an aligned window [a, b] inside [lo, mid] with
    w(a) * mu(Y) >= w(b)^2 is chosen, then the smallest r in
    [a + h, b - h] with w(r + h) <= w(r - h) * (w(b)/w(a))^(1/k). Otherwise
    the same search runs on q(r) = mu(Y \\ W_r) over windows inside [mid, hi].
    """
    if hi <= lo or lo < 0:
        raise InputError(f"invalid petal range [{lo}, {hi}]")
    verts = sorted(state.vertices)
    ent = np.array([state.entries[u] for u in verts])
    wts = mu.array[np.asarray(verts, dtype=np.int64)]
    total = float(wts.sum())

    def w(r: float) -> float:
        return float(wts[ent <= r].sum())

    def q(r: float) -> float:
        return float(wts[ent > r].sum())

    levels = petal_levels(total)
    span = hi - lo
    mid = lo + span / 2
    width = span / (2 * levels)
    h = span / (4 * levels * k)
    forward = w(mid) <= total / 2

    window: tuple[float, float] | None = None
    for i in range(levels):
        if forward:
            a = lo + i * width
            b = a + width
            if within(w(b) ** 2, w(a) * total):
                window = (a, b)
                break
        else:
            b = mid + i * width
            a = b + width
            if within(q(b) ** 2, q(a) * total):
                window = (a, b)
                break
    if window is None:
        logger.error(f"No feasible petal window in [{lo}, {hi}] for target {state.target}")
        raise InequalityViolation("petal_window", float(levels), 0.0, f"target={state.target}")

    a, b = window
    left, right = min(a, b), max(a, b)
    first, last = left + h, max(left + h, right - h)
    step = (right - left) / k
    grid = [left + (i + 0.5) * step for i in range(k)]
    breaks = [e + s for e in ent.tolist() if math.isfinite(e) for s in (-h, h)]
    points = sorted({r for r in [first, *grid, *breaks, last] if first <= r <= last})
    # w and q are step functions: one probe inside every gap covers the open pieces
    gaps = [(x + y) / 2 for x, y in zip(points, points[1:], strict=False)]
    candidates = sorted({*points, *gaps})

    def shell(r: float) -> tuple[float, float]:
        return max(r - h, left), min(r + h, right)

    if forward:
        growth = (w(b) / w(a)) ** (1 / k)
        chosen = next(
            (r for r in candidates if within(w(shell(r)[1]), w(shell(r)[0]) * growth)), None
        )
    else:
        growth = (q(b) / q(a)) ** (1 / k)
        chosen = next(
            (r for r in candidates if within(q(shell(r)[0]), q(shell(r)[1]) * growth)), None
        )
    if chosen is None:
        logger.error(f"No feasible petal radius in window [{left}, {right}]")
        raise InequalityViolation("petal_radius", float(k), 0.0, f"window=[{left}, {right}]")

    inner_r, outer_r = shell(chosen)
    inner = petal(state, inner_r)
    outer = petal(state, outer_r)
    triple = PetalTriple(
        inner=inner,
        mid=petal(state, chosen),
        outer=outer,
        radius=chosen,
        connector=_connector(state, inner),
        target=state.target,
        window=(a, b),
        forward=forward,
        lo=lo,
        hi=hi,
    )

    exponent = 1 + 1 / k
    if forward:
        assert_le("petal_accounting", w(outer_r) ** exponent, w(inner_r) * total ** (1 / k))
    else:
        assert_le("petal_accounting", q(inner_r) ** exponent, q(outer_r) * total ** (1 / k))
    return triple


def _halved(
    g: WeightedGraph, overlay: Mapping[Edge, float], path: list[int]
) -> dict[Edge, float]:
    halved = dict(overlay)
    for u, v in zip(path, path[1:], strict=False):
        key = edge_key(u, v)
        if key not in halved:
            halved[key] = g.weight(u, v) / 2
    return halved


def petal_decomposition(
    state: ClusterState, mu: Measure, k: int, verify: bool = False
) -> PetalDecomposition:
    """
    Carve petals until every remaining vertex is within 3/4 of the budget.

    A special first petal toward the given target is carved when it sits at
    distance at least half the budget; further petals target the smallest-id
    vertex farther than 3/4 of the budget and halve the edges of their own
    center-to-target path.
    """
    g = state.graph
    x0 = state.center
    budget = state.delta_in
    overlay = state.local_weights
    from_center, pred = state.center_tree
    far_target = from_center[state.target]

    petals: list[Petal] = []
    remaining = [state.vertices]
    remaining_radii = [state.radius]
    central_target = state.target
    y_set = state.vertices

    def record(step: ClusterState, triple: PetalTriple, special: bool) -> None:
        petal_overlay: Mapping[Edge, float] = overlay
        if not special:
            path_state = ClusterState(g, triple.outer, triple.connector[0], triple.target, 0.0, overlay)
            petal_overlay = _halved(g, overlay, path_state.target_path)
        outer_state = ClusterState(
            g, triple.outer, triple.connector[0], triple.target, 0.0, petal_overlay
        )
        petals.append(
            Petal(
                triple=triple,
                delta=outer_state.radius,
                overlay=petal_overlay,
                special=special,
                outer_radius=outer_state.radius,
            )
        )

    if state.target != x0 and far_target >= budget / 2:
        triple = create_petal(state, mu, far_target - budget / 2, far_target - budget / 4, k)
        record(state, triple, special=True)
        y_set = y_set - triple.inner
        central_target = triple.connector[1]
        remaining.append(y_set)

    while True:
        far = [v for v in sorted(y_set) if from_center[v] > 0.75 * budget]
        if not far:
            break
        step = ClusterState(g, y_set, x0, far[0], budget, overlay)
        triple = create_petal(step, mu, 0.0, budget / 8, k)
        record(step, triple, special=False)
        y_set = y_set - triple.inner
        remaining.append(y_set)

    if verify:
        for y in remaining:
            for z in y:
                if z != x0 and pred[z] not in y:
                    raise InequalityViolation(
                        "path_preservation", 1.0, 0.0, f"vertex={z} predecessor={pred[z]}"
                    )
    for y in remaining[1:]:
        remaining_radii.append(ClusterState(g, y, x0, x0, budget, overlay).radius)
    if verify:
        for before, after in zip(remaining_radii, remaining_radii[1:], strict=False):
            assert_le("radius_monotone", after, before)

    logger.debug(
        f"Petal decomposition of {len(state.vertices)} vertices around {x0}: "
        f"{len(petals)} petals, central cluster of {len(y_set)}"
    )
    return PetalDecomposition(
        petals=petals,
        central=y_set,
        central_target=central_target,
        remaining=remaining,
        remaining_radii=remaining_radii,
    )
