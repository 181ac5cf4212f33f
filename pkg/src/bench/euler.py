"""
Copy-count lower bound for low-distortion clan embeddings of high-girth graphs.

When a clan embedding of an unweighted graph into a tree has distortion
below g/4 - 3/2, it needs at least n + chi(G) copies, where
chi(G) = |E| - |V| + 1 is the Euler characteristic.
"""

import logging
import math
from typing import Literal

from pydantic import BaseModel

from src.bench.girth import girth
from src.bench.oracle import Host, verify_clan_distortion
from src.core.checks import assert_le
from src.core.graph import WeightedGraph
from src.core.hosts import ClanEmbedding
from src.core.metric import shortest_path_metric

logger = logging.getLogger(__name__)


class EulerReport(BaseModel):
    total_copies: int
    threshold: int
    euler_characteristic: int
    girth: float
    distortion: float
    distortion_threshold: float
    verdict: Literal["holds", "not_applicable"]


def euler_tightness_check(
    g: WeightedGraph, host: Host, emb: ClanEmbedding, girth_value: float | None = None
) -> EulerReport:
    """
    Measure the distortion of ``emb`` and, when it is below g/4 - 3/2,
    assert sum_v |f(v)| >= n + chi(G).

    Raises:
        InequalityViolation: the guard fired and the copy count is too small.
    """
    g_value = girth(g) if girth_value is None else girth_value
    chi = g.m - g.n + 1
    threshold = g.n + chi
    guard = g_value / 4 - 1.5 if math.isfinite(g_value) else math.inf
    report = verify_clan_distortion(shortest_path_metric(g), host, emb, bound=1.0)
    distortion = report.max_distortion_ratio
    total = emb.total_copies

    verdict: Literal["holds", "not_applicable"] = "not_applicable"
    if distortion < guard:
        assert_le("euler_copies", threshold, total, f"distortion={distortion} girth={g_value}")
        verdict = "holds"
    logger.info(
        f"Euler check: copies={total}, n+chi={threshold}, distortion={distortion:.4f}, "
        f"guard={guard}, verdict={verdict}"
    )
    return EulerReport(
        total_copies=total,
        threshold=threshold,
        euler_characteristic=chi,
        girth=g_value,
        distortion=distortion,
        distortion_threshold=guard,
        verdict=verdict,
    )
