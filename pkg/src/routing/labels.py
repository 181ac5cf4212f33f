"""
Distance labels on trees built from the heavy-path decomposition.

A copy's label lists, for every heavy path met on its root path, the path
head and the depth at which the root path leaves it. Two labels agree on a
prefix of heads; on the deepest common head the shallower exit is the
lowest common ancestor.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

from src.core.hosts import SpanningTree
from src.routing.tree_routing import heavy_path_tree
from src.utils.errors import InputError

logger = logging.getLogger(__name__)

LabelMode = Literal["exact", "approx2"]

# gap codes packed per word in approx2 labels
CODES_PER_WORD = 8
ZERO_GAP = None


@dataclass(frozen=True)
class DistanceLabel:
    """
    Root distance, heavy-path heads, and per head either the exact exit depth
    or a quantized gap code (gap = 2**(code/2), None for a zero gap).
    """

    depth: float
    heads: tuple[int, ...]
    exits: tuple[float, ...] = ()
    codes: tuple[int | None, ...] = ()


def quantize_gap(gap: float) -> int | None:
    """Smallest code j with 2**(j/2) >= gap; None for a zero gap."""
    if gap <= 0:
        return ZERO_GAP
    code = math.ceil(2 * math.log2(gap))
    while 2 ** (code / 2) < gap:
        code += 1
    while 2 ** ((code - 1) / 2) >= gap:
        code -= 1
    return code


def gap_value(code: int | None) -> float:
    return 0.0 if code is None else 2 ** (code / 2)


@dataclass(frozen=True)
class DistanceLabels:
    """Labels of every copy of a tree, padded to a common width."""

    mode: LabelMode
    labels: list[DistanceLabel]
    width: int

    @property
    def stretch(self) -> int:
        return 1 if self.mode == "exact" else 2

    @property
    def label_words(self) -> int:
        """Words per label: depth plus heads and exits, or heads and packed codes."""
        if self.mode == "exact":
            return 1 + 2 * self.width
        return 1 + self.width + math.ceil(self.width / CODES_PER_WORD)

    def estimate(self, a: DistanceLabel, b: DistanceLabel) -> float:
        """Distance estimate A(a, b), within [d, stretch * d]."""
        i = -1
        for ha, hb in zip(a.heads, b.heads, strict=False):
            if ha != hb:
                break
            i += 1
        if i < 0:
            raise InputError("labels come from different trees")
        if self.mode == "exact":
            meet = min(a.exits[i], b.exits[i])
        else:
            meet = min(a.depth - gap_value(a.codes[i]), b.depth - gap_value(b.codes[i]))
        return a.depth + b.depth - 2 * meet


def build_distance_labels(t: SpanningTree, mode: LabelMode = "exact") -> DistanceLabels:
    """
    Labels for every copy of ``t``.

    Exact labels store exit depths and give d_T exactly; approx2 labels store
    the root distance once and every gap to an exit rounded up to a
    half-integer power of two, which keeps the estimate within twice d_T.
    """
    if mode not in ("exact", "approx2"):
        raise InputError(f"unknown label mode '{mode}'")
    hp = heavy_path_tree(t)
    labels = []
    for a in range(hp.size):
        heads: list[int] = []
        exits: list[float] = []
        b = a
        while True:
            heads.append(hp.head[b])
            exits.append(hp.depth[b])
            top = hp.head[b]
            if top == hp.root:
                break
            b = hp.parent[top]
        heads.reverse()
        exits.reverse()
        depth = hp.depth[a]
        if mode == "exact":
            labels.append(DistanceLabel(depth=depth, heads=tuple(heads), exits=tuple(exits)))
        else:
            codes = tuple(quantize_gap(depth - e) for e in exits)
            labels.append(DistanceLabel(depth=depth, heads=tuple(heads), codes=codes))
    width = max(len(label.heads) for label in labels)
    logger.debug(f"{mode} distance labels over {hp.size} copies, width {width}")
    return DistanceLabels(mode=mode, labels=labels, width=width)
