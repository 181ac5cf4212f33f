"""
Brute-force oracles for clan embeddings.

Host distances are recomputed from the host structure (LCA labels or tree
walks) on every call; nothing produced by a builder is reused.
"""

import logging
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from src.core.checks import REL_TOL
from src.core.hosts import ClanEmbedding, SpanningTree, Ultrametric
from src.core.metric import MetricSpace
from src.utils.errors import InequalityViolation, InputError

logger = logging.getLogger(__name__)

Host = Ultrametric | SpanningTree


class VerifyReport(BaseModel):
    """Outcome of an exhaustive distortion and domination check."""

    dominating_ok: bool
    max_distortion_ratio: float
    bound: float
    measure_bound_ok: bool | None = None
    pairs_checked: int = Field(default=0, ge=0)
    details: dict[str, Any] = Field(default_factory=dict)

    @property
    def distortion_ok(self) -> bool:
        return self.max_distortion_ratio <= self.bound * (1 + REL_TOL)

    @property
    def ok(self) -> bool:
        return self.dominating_ok and self.distortion_ok and self.measure_bound_ok is not False

    def raise_for_violation(self) -> None:
        """Raise InequalityViolation for the first failed condition."""
        if not self.dominating_ok:
            d = self.details["domination_pair"]
            raise InequalityViolation(
                "domination",
                self.details["domination_metric"],
                self.details["domination_host"],
                f"pair={d}",
            )
        if not self.distortion_ok:
            raise InequalityViolation(
                "distortion",
                self.max_distortion_ratio,
                self.bound,
                f"pair={self.details['worst_pair']}",
            )
        if self.measure_bound_ok is False:
            raise InequalityViolation(
                "measure_bound",
                self.details["weighted_copies"],
                self.details["measure_bound"],
            )


def host_copy_distances(host: Host, copies: list[int]) -> np.ndarray:
    """Pairwise host distances between the given copies."""
    if isinstance(host, Ultrametric):
        for c in copies:
            if not (0 <= c < host.size and host.is_leaf(c)):
                raise InputError(f"copy {c} is not a leaf of the ultrametric")
        return host.leaf_distances(copies)
    idx = np.asarray(copies, dtype=np.int64)
    return np.vstack([host.distances_from(c)[idx] for c in copies])


def _cross_distances(host: Host, left: list[int], right: list[int]) -> np.ndarray:
    if isinstance(host, Ultrametric):
        return np.array([[host.distance(a, b) for b in right] for a in left])
    idx = np.asarray(right, dtype=np.int64)
    return np.vstack([host.distances_from(a)[idx] for a in left])


def _grouped_copies(
    emb: ClanEmbedding, points: list[int]
) -> tuple[list[int], np.ndarray, dict[int, int]]:
    """Copies sorted by owner, the start offset of every clan, and copy->index."""
    copies: list[int] = []
    starts = []
    for x in points:
        if x not in emb.clans:
            raise InputError(f"point {x} has no clan")
        starts.append(len(copies))
        copies.extend(emb.clans[x])
    position = {c: i for i, c in enumerate(copies)}
    return copies, np.asarray(starts, dtype=np.int64), position


def verify_clan_distortion(
    m: MetricSpace,
    host: Host,
    emb: ClanEmbedding,
    bound: float,
    points: Any = None,
    measure: np.ndarray | None = None,
    measure_bound: float | None = None,
) -> VerifyReport:
    """
    Exhaustively check domination and clan distortion over all ordered pairs.

    Args:
        m: Source metric.
        host: Ultrametric or spanning tree.
        emb: Clan embedding into ``host``.
        bound: Distortion bound t in min_{y' in f(y)} d(y', chi(x)) <= t d(x, y).
        points: Restrict the check to these points (all clan points when None).
        measure: Optional per-point weights for the copy-measure check.
        measure_bound: Upper bound for sum_x measure(x) |f(x)|.
    """
    owners = emb.owner_map()
    host_copies = host.leaves() if isinstance(host, Ultrametric) else range(host.size)
    orphans = [c for c in host_copies if c not in owners]
    if orphans:
        raise InputError(f"host copy {orphans[0]} belongs to no clan ({len(orphans)} in total)")
    pts = sorted(emb.clans) if points is None else sorted(int(x) for x in points)
    copies, starts, position = _grouped_copies(emb, pts)
    try:
        chief_idx = np.asarray([position[emb.chief[x]] for x in pts], dtype=np.int64)
    except KeyError as e:
        raise InputError(f"chief copy {e} is not in its clan") from e

    host_d = host_copy_distances(host, copies)
    metric_d = m.dist[np.ix_(pts, pts)]
    n = len(pts)
    off = ~np.eye(n, dtype=bool)

    # reach[x, y] = min over copies y' of y of d_host(y', chief(x))
    reach = np.minimum.reduceat(host_d[chief_idx], starts, axis=1)
    closest = np.minimum.reduceat(np.minimum.reduceat(host_d, starts, axis=1), starts, axis=0)

    details: dict[str, Any] = {}
    if n > 1:
        ratios = np.where(off, reach / np.where(off, metric_d, 1.0), 0.0)
        wx, wy = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
        max_ratio = float(ratios[wx, wy])
        details["worst_pair"] = [pts[wx], pts[wy]]

        slack = np.where(off, closest - metric_d * (1 - REL_TOL), np.inf)
        dx, dy = np.unravel_index(int(np.argmin(slack)), slack.shape)
        dominating = bool(slack[dx, dy] >= 0)
        details["domination_pair"] = [pts[dx], pts[dy]]
        details["domination_metric"] = float(metric_d[dx, dy])
        details["domination_host"] = float(closest[dx, dy])
    else:
        max_ratio = 1.0
        dominating = True

    measure_ok = None
    if measure is not None and measure_bound is not None:
        weighted = float(sum(measure[x] * len(emb.clans[x]) for x in pts))
        measure_ok = weighted <= measure_bound * (1 + REL_TOL)
        details["weighted_copies"] = weighted
        details["measure_bound"] = measure_bound

    report = VerifyReport(
        dominating_ok=dominating,
        max_distortion_ratio=max_ratio,
        bound=float(bound),
        measure_bound_ok=measure_ok,
        pairs_checked=n * (n - 1),
        details=details,
    )
    logger.debug(
        f"Verified {report.pairs_checked} pairs: ratio={max_ratio:.4f}, "
        f"bound={bound}, dominating={dominating}"
    )
    return report


def path_distortion_eval(
    host: Host, emb: ClanEmbedding, seq: list[int]
) -> tuple[float, list[int]]:
    """
    Cheapest copy sequence along a point sequence.

    Dynamic program over positions where the state is the copy chosen for the
    current point and a transition costs the host distance between
    consecutive copies. Ties keep the smallest copy id.

    Returns:
        (minimum total cost, one optimal copy per position)
    """
    if len(seq) < 2:
        raise InputError("path sequence needs at least two points")
    for x in seq:
        if x not in emb.clans:
            raise InputError(f"unknown point {x} in sequence")

    cost = np.zeros(len(emb.clans[seq[0]]))
    back: list[np.ndarray] = []
    for prev_x, next_x in zip(seq, seq[1:], strict=False):
        prev_copies, next_copies = emb.clans[prev_x], emb.clans[next_x]
        step = _cross_distances(host, prev_copies, next_copies)
        total = cost[:, None] + step
        choice = np.argmin(total, axis=0)
        back.append(choice)
        cost = total[choice, np.arange(len(next_copies))]

    last = int(np.argmin(cost))
    picks = [last]
    for choice in reversed(back):
        picks.append(int(choice[picks[-1]]))
    picks.reverse()
    chosen = [emb.clans[x][i] for x, i in zip(seq, picks, strict=True)]
    return float(cost[last]), chosen


def copy_stats(emb: ClanEmbedding) -> dict[str, float]:
    """Clan size mean, max and total."""
    sizes = np.asarray([len(c) for c in emb.clans.values()], dtype=float)
    return {
        "clan_mean": float(sizes.mean()),
        "clan_max": float(sizes.max()),
        "total_copies": float(sizes.sum()),
    }
