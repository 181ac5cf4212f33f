"""
Multiplicative-weights construction of a uniform distribution over clan
embeddings with a per-point expected clan size guarantee.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from src.bench.oracle import verify_clan_distortion
from src.core.checks import assert_le
from src.core.hosts import ClanEmbedding
from src.core.io import embedding_from_dict, embedding_to_dict, read_json
from src.core.measure import Measure
from src.core.metric import MetricSpace
from src.distribution.oracle import ClanOracle, Host, OracleBounds
from src.utils.config import DEFAULT_MAX_ROUNDS
from src.utils.errors import InequalityViolation, InputError
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)


@dataclass
class EmbeddingDistribution:
    """Uniform distribution over ``members``, plus the parameters that built it."""

    members: list[tuple[Host, ClanEmbedding]]
    rounds: int
    delta: float
    bounds: OracleBounds
    slack: float
    averages: np.ndarray = field(repr=False)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.averages.size)


def mwu_rounds(bounds: OracleBounds, n: int, slack: float) -> int:
    """T = ceil(4 rho alpha ln n / slack^2)."""
    return math.ceil(4 * bounds.rho * bounds.alpha * math.log(n) / slack**2)


def build_distribution(
    oracle: ClanOracle,
    n: int,
    slack: float,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    weight_log: str | Path | None = None,
    metric: MetricSpace | None = None,
) -> EmbeddingDistribution:
    """
    Run the multiplicative-weights loop against ``oracle``.

    Round t normalizes the weights into mu^t, asks the oracle for an
    embedding, and multiplies w_i by (1 + delta)^(|f(x_i)|/rho). Weights are
    kept as logarithms. After T rounds every point's average clan size is
    at most alpha + slack, which is asserted.

    Args:
        oracle: Bounded oracle.
        n: Number of points.
        slack: Additive slack in (0, 1/2).
        max_rounds: Refuse to run when the realized T exceeds this.
        weight_log: Optional CSV path for the per-round measures.
        metric: When given, every member is checked for domination and
            distortion at most beta against this metric as it is built.

    Raises:
        InputError: bad n or slack, or T above ``max_rounds``.
        InequalityViolation: the oracle or the weight argument broke a bound.
    """
    if n < 2:
        raise InputError(f"build_distribution needs n >= 2, got {n}")
    if not 0 < slack < 0.5:
        raise InputError(f"slack must lie in (0, 1/2), got {slack}")

    bounds = oracle.bounds(n)
    rounds = mwu_rounds(bounds, n, slack)
    if rounds > max_rounds:
        raise InputError(f"realized round count T={rounds} exceeds the cap {max_rounds}")
    delta = slack / bounds.alpha
    step = math.log1p(delta)
    log_n = math.log(n)
    logger.info(
        f"Building distribution: n={n}, T={rounds}, delta={delta:.6g}, "
        f"rho={bounds.rho:.6g}, alpha={bounds.alpha:.6g}, beta={bounds.beta:.6g}"
    )

    log_w = np.zeros(n)
    members: list[tuple[Host, ClanEmbedding]] = []
    totals = np.zeros(n)
    gain = 0.0
    rows: list[np.ndarray] = []

    for t in range(rounds):
        measure = Measure.from_weights(np.exp(log_w - logsumexp(log_w)))
        if weight_log is not None:
            rows.append(measure.array.copy())
        host, emb = oracle.embed(measure)
        sizes = emb.sizes(n)
        if sizes.min() < 1:
            raise InequalityViolation("oracle_cover", float(sizes.min()), 1.0, f"round={t}")
        assert_le("oracle_max_copies", float(sizes.max()), bounds.rho, f"round={t}")
        assert_le("oracle_expected_copies", measure.weighted_sizes(sizes), bounds.alpha, f"round={t}")
        if metric is not None:
            report = verify_clan_distortion(metric, host, emb, bounds.beta)
            if not report.dominating_ok:
                report.raise_for_violation()
            assert_le(
                "member_distortion", report.max_distortion_ratio, bounds.beta, f"round={t}"
            )

        penalty = sizes / bounds.rho
        gain += float(penalty @ measure.array)
        log_w = log_w + step * penalty
        assert_le("total_weight", float(logsumexp(log_w)), delta * gain + log_n, f"round={t}")

        totals += sizes
        members.append((host, emb))
        if (t + 1) % 1000 == 0:
            logger.debug(f"MWU round {t + 1}/{rounds}, max log-weight {log_w.max():.4f}")

    averages = totals / rounds
    worst = int(np.argmax(averages))
    assert_le("average_copies", float(averages[worst]), bounds.alpha + slack, f"point={worst}")

    if weight_log is not None:
        frame = pd.DataFrame(np.vstack(rows), columns=[str(x) for x in range(n)])
        frame.index.name = "round"
        frame.to_csv(weight_log)
        logger.info(f"Wrote {len(frame)} weight rows to {weight_log}")

    return EmbeddingDistribution(
        members=members,
        rounds=rounds,
        delta=delta,
        bounds=bounds,
        slack=slack,
        averages=averages,
    )


def sample(d: EmbeddingDistribution, seed: int) -> tuple[Host, ClanEmbedding]:
    """Uniformly pick one member with a seeded generator."""
    if not d.members:
        raise InputError("cannot sample from an empty distribution")
    index = int(make_rng(seed).integers(len(d.members)))
    return d.members[index]


def distribution_stats(
    d: EmbeddingDistribution, m: MetricSpace | None = None
) -> dict[str, Any]:
    """
    Per-point average clan size, max clan size, and per-member distortion.

    Distortions are recomputed with the brute-force oracle when ``m`` is given.
    """
    if not d.members:
        raise InputError("empty distribution")
    n = d.n
    sizes = np.vstack([emb.sizes(n) for _, emb in d.members])
    stats: dict[str, Any] = {
        "rounds": d.rounds,
        "delta": d.delta,
        "rho": d.bounds.rho,
        "alpha": d.bounds.alpha,
        "beta": d.bounds.beta,
        "slack": d.slack,
        "average_clan_size": sizes.mean(axis=0).tolist(),
        "max_clan_size": float(sizes.max()),
        "clan_mean": float(sizes.mean()),
    }
    if m is not None:
        ratios = []
        for host, emb in d.members:
            report = verify_clan_distortion(m, host, emb, d.bounds.beta)
            ratios.append(report.max_distortion_ratio)
        stats["member_distortion"] = ratios
        stats["max_member_distortion"] = max(ratios)
    return stats


def distribution_to_dict(d: EmbeddingDistribution) -> dict[str, Any]:
    """Parameter header followed by every member's embedding document."""
    return {
        "kind": "distribution",
        "params": {
            "rounds": d.rounds,
            "delta": d.delta,
            "rho": d.bounds.rho,
            "alpha": d.bounds.alpha,
            "beta": d.bounds.beta,
            "slack": d.slack,
            **d.meta,
        },
        "averages": d.averages.tolist(),
        "members": [embedding_to_dict(host, emb) for host, emb in d.members],
    }


def distribution_from_dict(doc: dict[str, Any]) -> EmbeddingDistribution:
    try:
        params = dict(doc["params"])
        members = [embedding_from_dict(member) for member in doc["members"]]
        bounds = OracleBounds(
            rho=params.pop("rho"), alpha=params.pop("alpha"), beta=params.pop("beta")
        )
        return EmbeddingDistribution(
            members=members,
            rounds=int(params.pop("rounds")),
            delta=float(params.pop("delta")),
            bounds=bounds,
            slack=float(params.pop("slack")),
            averages=np.asarray(doc["averages"], dtype=float),
            meta=params,
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed distribution document: {e}") from e


def load_distribution(path: str | Path) -> EmbeddingDistribution:
    return distribution_from_dict(read_json(path))
