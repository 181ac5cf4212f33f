"""
Clan embeddings of finite metric spaces into ultrametrics.

The builder recursively carves a ball around a well-chosen center: the inner
ball Q and the padded ball P overlap, points in the overlap are duplicated,
and the padding is picked so that the total (>=1)-measure of the copies stays
below mu(X)^(1+1/k) while every point keeps a chief within distortion 16k.
"""

import logging
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.bench.oracle import verify_clan_distortion
from src.core.checks import assert_le
from src.core.hosts import ClanEmbedding, Ultrametric, UltrametricBuilder
from src.core.measure import Measure
from src.core.metric import MetricSpace, PointSet, as_points, mu_star
from src.embedding.params import ClanParams
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionResult:
    """Center, radius and the three sets of one ball partition."""

    center: int
    radius: float
    P: PointSet
    Q: PointSet
    Qbar: PointSet
    pad: float
    index: int
    chief_radius: float


@dataclass
class PartitionTrace:
    """One internal node of a recursion, recorded on request."""

    depth: int
    mass: float
    diameter: float
    p_mass: float
    qbar_mass: float
    p_diameter: float
    partition: PartitionResult = field(repr=False)


def _partition(
    m: MetricSpace, subset: Any, mu: Measure, k: int, balanced: bool, check: bool
) -> PartitionResult:
    pts = as_points(subset)
    if pts.size < 2:
        raise InputError(f"partition needs at least 2 points, got {pts.size}")
    if k < 1:
        raise InputError(f"k must be a positive integer, got {k}")

    block = m.dist[np.ix_(pts, pts)]
    diam = float(block.max())
    weights = mu.array[pts]
    total = float(weights.sum())

    # smallest ratio mu(B(v, diam/4)) / mu(B(v, diam/8)); argmin keeps the smallest id
    quarter = (block <= diam / 4) @ weights
    eighth = (block <= diam / 8) @ weights
    vi = int(np.argmin(quarter / eighth))
    row = block[vi]

    steps = k + 1 if balanced else k
    # radius of Q_i is diam/8 + i * diam/(8*steps), written to hit diam/8 and diam/4 exactly
    radii = np.array([diam * (steps + i) / (8 * steps) for i in range(steps + 1)])
    masses = np.array([float(weights[row <= r].sum()) for r in radii])

    i = int(np.argmin(masses[1 : k + 1] / masses[:k]))
    if balanced and not (masses[i + 1] <= 2 * total / 3 or masses[i] >= total / 3):
        i += 1

    radius = float(radii[i])
    pad = float(radii[i + 1] - radii[i])
    chief_radius = diam * (2 * steps + 2 * i + 1) / (16 * steps)
    result = PartitionResult(
        center=int(pts[vi]),
        radius=radius,
        P=pts[row <= radii[i + 1]],
        Q=pts[row <= radius],
        Qbar=pts[row > radius],
        pad=pad,
        index=i,
        chief_radius=chief_radius,
    )

    if check:
        mu_p = float(weights[row <= radii[i + 1]].sum())
        mu_q = float(weights[row <= radius].sum())
        ratio_bound = mu_q * (mu_star(m, pts, mu) / mu_star(m, result.P, mu)) ** (1 / k)
        assert_le("partition_measure_ratio", mu_p, ratio_bound, f"center={result.center}")
        p_diam = float(m.dist[np.ix_(result.P, result.P)].max())
        assert_le("partition_p_diameter", p_diam, diam / 2, f"center={result.center}")
        if balanced:
            smaller = min(mu_p, total - mu_q)
            assert_le("balanced_min_mass", smaller, 2 * total / 3, f"center={result.center}")
    return result


def partition_ball(
    m: MetricSpace, subset: Any, mu: Measure, k: int, check: bool = True
) -> PartitionResult:
    """
    Ball partition with padding diam/(8k).

    Args:
        m: Metric space.
        subset: Points of the current cluster (at least two).
        mu: (>=1)-measure.
        k: Distortion parameter.
        check: Assert mu(P) <= mu(Q) * (mu*(X)/mu*(P))^(1/k) and diam(P) <= diam(X)/2.

    Returns:
        The partition; Q is the ball of radius R, P the padded ball, Qbar = X \\ Q.
    """
    return _partition(m, subset, mu, k, balanced=False, check=check)


def partition_ball_balanced(
    m: MetricSpace, subset: Any, mu: Measure, k: int, check: bool = True
) -> PartitionResult:
    """
    Ball partition with padding diam/(8(k+1)) and a shifted index so that
    min(mu(P), mu(Qbar)) <= 2/3 mu(X) and diam(P) <= diam(X)/2.
    """
    return _partition(m, subset, mu, k, balanced=True, check=check)


class _UltrametricRecursion:
    def __init__(
        self,
        m: MetricSpace,
        mu: Measure,
        k: int,
        balanced: bool,
        verify: bool,
        trace: list[PartitionTrace] | None,
    ) -> None:
        self.m = m
        self.mu = mu
        self.k = k
        self.balanced = balanced
        self.verify = verify
        self.trace = trace
        self.builder = UltrametricBuilder()

    def run(
        self, pts: PointSet, depth: int
    ) -> tuple[int, dict[int, list[int]], dict[int, int]]:
        if pts.size == 1:
            x = int(pts[0])
            leaf = self.builder.add_leaf(x)
            return leaf, {x: [leaf]}, {x: leaf}

        part = _partition(self.m, pts, self.mu, self.k, self.balanced, self.verify)
        diam = float(self.m.dist[np.ix_(pts, pts)].max())

        p_root, p_clans, p_chief = self.run(part.P, depth + 1)
        q_root, q_clans, q_chief = self.run(part.Qbar, depth + 1)
        root = self.builder.add_internal(diam, (p_root, q_root))

        clans: dict[int, list[int]] = {}
        for x in pts.tolist():
            clans[x] = p_clans.get(x, []) + q_clans.get(x, [])
        chief: dict[int, int] = {}
        near = self.m.dist[part.center, pts] <= part.chief_radius
        for x, inside in zip(pts.tolist(), near, strict=True):
            chief[x] = p_chief[x] if inside else q_chief[x]

        if self.trace is not None:
            self.trace.append(
                PartitionTrace(
                    depth=depth,
                    mass=self.mu.mass(pts),
                    diameter=diam,
                    p_mass=self.mu.mass(part.P),
                    qbar_mass=self.mu.mass(part.Qbar),
                    p_diameter=float(self.m.dist[np.ix_(part.P, part.P)].max()),
                    partition=part,
                )
            )
        if self.verify:
            weighted = sum(self.mu.array[x] * len(c) for x, c in clans.items())
            bound = self.mu.mass(pts) * mu_star(self.m, pts, self.mu) ** (1 / self.k)
            assert_le("cluster_measure_bound", weighted, bound, f"depth={depth}")

        logger.debug(
            f"Split {pts.size} points at depth {depth}: |P|={part.P.size}, "
            f"|Qbar|={part.Qbar.size}, center={part.center}"
        )
        return root, clans, chief


def clan_embed_ultrametric(
    m: MetricSpace,
    subset: Any,
    mu: Measure,
    params: ClanParams,
    trace: list[PartitionTrace] | None = None,
) -> tuple[Ultrametric, ClanEmbedding]:
    """
    Clan embedding of ``subset`` into an ultrametric for a (>=1)-measure.

    The result is dominating, has distortion 16k (16(k+1) for the balanced
    variant) and satisfies sum_x mu(x)|f(x)| <= mu(X)^(1+1/k). With
    ``params.verify`` all three are asserted after construction.

    Args:
        m: Metric space.
        subset: Points to embed.
        mu: (>=1)-measure on the points.
        params: Must carry ``k``; ``variant`` selects the partition.
        trace: Optional list receiving one record per internal node.
    """
    if mu.kind != "ge1":
        raise InputError("clan_embed_ultrametric needs a ge1 measure")
    if params.k is None:
        raise InputError("clan_embed_ultrametric needs an integer k")
    pts = as_points(subset)
    if pts.size == 0:
        raise InputError("cannot embed an empty subset")

    k = params.k
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * int(pts.size) + 1000))
    recursion = _UltrametricRecursion(
        m, mu, k, params.variant == "balanced", params.verify, trace
    )
    _, clans, chief = recursion.run(pts, depth=0)
    host = recursion.builder.build()
    emb = ClanEmbedding(clans, chief)

    if params.verify:
        host.validate()
        emb.validate(host.leaves(), require_cover=True)
        report = verify_clan_distortion(
            m, host, emb, params.distortion_factor(k), points=pts
        )
        report.raise_for_violation()
        weighted = mu.weighted_sizes(emb.sizes(mu.n))
        assert_le("measure_bound", weighted, mu.mass(pts) ** (1 + 1 / k))

    logger.debug(
        f"Ultrametric clan embedding of {pts.size} points: "
        f"{emb.total_copies} copies, k={k}, variant={params.variant}"
    )
    return host, emb


def clan_embed_probability(
    m: MetricSpace, mu: Measure, params: ClanParams
) -> tuple[Ultrametric, ClanEmbedding]:
    """
    Clan embedding for a probability measure.

    The measure is lifted to 1 + n*mu (total 2n) and handed to the
    (>=1)-measure builder. With ``params.k`` the expected clan size is at most
    2(2n)^(1/k); with ``params.epsilon`` the internal k is
    ceil(ln(2n)/ln(1+eps/2)) and the expected clan size is at most 1+eps.
    Expected and maximum copy counts are always asserted.
    """
    if mu.kind != "probability":
        raise InputError("clan_embed_probability needs a probability measure")
    n = m.n
    if mu.n != n:
        raise InputError(f"measure has {mu.n} points, metric has {n}")

    k_int = params.internal_k(n)
    inner = ClanParams(k=k_int, variant=params.variant, verify=params.verify)
    host, emb = clan_embed_ultrametric(m, m.points(), mu.to_ge1(), inner)

    sizes = emb.sizes(n)
    expected = mu.weighted_sizes(sizes)
    if params.epsilon is not None:
        eps = params.epsilon
        assert_le("expected_copies", expected, 1 + eps, f"epsilon={eps}")
        assert_le("max_copies_per_point", float(sizes.max()), (1 + eps) * n + 1)
    else:
        assert_le("expected_copies", expected, 2 * (2 * n) ** (1 / k_int), f"k={k_int}")
    assert_le("total_copies", float(sizes.sum()), (2 * n) ** (1 + 1 / k_int))
    return host, emb
