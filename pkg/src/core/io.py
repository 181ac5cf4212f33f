"""
Text and JSON formats: edge-list graphs, measures, dense metrics and
embedding/distribution documents.
"""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src.core.graph import WeightedGraph
from src.core.hosts import ClanEmbedding, SpanningTree, Ultrametric
from src.core.measure import Measure
from src.core.metric import MetricSpace
from src.utils.errors import InputError, ParseError

logger = logging.getLogger(__name__)

Host = Ultrametric | SpanningTree


def _read_lines(path: str | Path) -> list[tuple[int, str]]:
    file = Path(path)
    if not file.is_file():
        raise InputError(f"input not found: {path}")
    lines = []
    for number, raw in enumerate(file.read_text(encoding="utf-8").splitlines(), start=1):
        text = raw.strip()
        if text and not text.startswith("#"):
            lines.append((number, text))
    return lines


def load_graph(path: str | Path) -> WeightedGraph:
    """
    Read an edge-list graph: header "n m", then m lines "u v w".

    Raises:
        InputError: missing file or validation failure.
        ParseError: malformed line.
    """
    lines = _read_lines(path)
    if not lines:
        raise ParseError(str(path), 1, "missing header line 'n m'")
    number, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(str(path), number, "header must be 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError as e:
        raise ParseError(str(path), number, "header values must be integers") from e

    edges = []
    for number, text in lines[1:]:
        fields = text.split()
        if len(fields) != 3:
            raise ParseError(str(path), number, "edge line must be 'u v w'")
        try:
            edges.append((int(fields[0]), int(fields[1]), float(fields[2])))
        except ValueError as e:
            raise ParseError(str(path), number, f"cannot parse edge '{text}'") from e
    if len(edges) != m:
        raise InputError(f"{path}: header announces {m} edges, found {len(edges)}")

    graph = WeightedGraph(n, edges)
    logger.info(f"Loaded graph {path} with n={graph.n}, m={graph.m}")
    return graph


def save_graph(g: WeightedGraph, path: str | Path) -> None:
    rows = [f"{g.n} {g.m}"]
    rows.extend(f"{u} {v} {w!r}" for u, v, w in g.edges)
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def load_measure(path: str | Path, n: int, kind: str = "probability") -> Measure:
    """Read a measure file of n lines "id value"."""
    values: list[float | None] = [None] * n
    for number, text in _read_lines(path):
        fields = text.split()
        if len(fields) != 2:
            raise ParseError(str(path), number, "measure line must be 'id value'")
        try:
            point, value = int(fields[0]), float(fields[1])
        except ValueError as e:
            raise ParseError(str(path), number, f"cannot parse '{text}'") from e
        if not 0 <= point < n:
            raise ParseError(str(path), number, f"point {point} outside 0..{n - 1}")
        values[point] = value
    missing = [i for i, v in enumerate(values) if v is None]
    if missing:
        raise InputError(f"{path}: no measure value for points {missing[:5]}")
    try:
        return Measure(values=values, kind=kind)
    except ValueError as e:
        raise InputError(f"{path}: {e}") from e


def load_metric_csv(path: str | Path) -> MetricSpace:
    """Read a dense n x n CSV distance table and validate it."""
    if not Path(path).is_file():
        raise InputError(f"input not found: {path}")
    try:
        table = pd.read_csv(path, header=None, comment="#").to_numpy(dtype=float)
    except ValueError as e:
        raise InputError(f"{path}: cannot parse distance table: {e}") from e
    return MetricSpace(table, validate=True)


def embedding_to_dict(host: Host, emb: ClanEmbedding) -> dict[str, Any]:
    """Serialize a host plus clan embedding with a fixed key order."""
    doc: dict[str, Any]
    if isinstance(host, Ultrametric):
        doc = {
            "kind": "ultrametric",
            "nodes": [
                {
                    "id": node,
                    "label": host.label[node],
                    "parent": host.parent[node],
                    "owner": host.owner[node],
                }
                for node in range(host.size)
            ],
        }
    else:
        doc = {
            "kind": "spanning_tree",
            "root": host.root,
            "copies": [{"id": c, "orig": o} for c, o in enumerate(host.orig)],
            "edges": [[a, b, w] for a, b, w in host.edges],
        }
    doc["clans"] = {str(x): copies for x, copies in emb.clans.items()}
    doc["chief"] = {str(x): c for x, c in emb.chief.items()}
    return doc


def embedding_from_dict(doc: dict[str, Any]) -> tuple[Host, ClanEmbedding]:
    """Inverse of embedding_to_dict; validates consistency with the host."""
    try:
        kind = doc["kind"]
        clans = {int(x): [int(c) for c in copies] for x, copies in doc["clans"].items()}
        chief = {int(x): int(c) for x, c in doc["chief"].items()}
        host: Host
        if kind == "ultrametric":
            nodes = sorted(doc["nodes"], key=lambda node: node["id"])
            host = Ultrametric(
                [node["parent"] for node in nodes],
                [node["label"] for node in nodes],
                [node["owner"] for node in nodes],
            )
            host_copies = host.leaves()
        elif kind == "spanning_tree":
            copies = sorted(doc["copies"], key=lambda c: c["id"])
            host = SpanningTree(
                [c["orig"] for c in copies],
                [(a, b, w) for a, b, w in doc["edges"]],
                doc.get("root"),
            )
            host_copies = list(range(host.size))
        else:
            raise InputError(f"unknown embedding kind '{kind}'")
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed embedding document: {e}") from e

    emb = ClanEmbedding(clans, chief)
    emb.validate(host_copies, require_cover=isinstance(host, SpanningTree))
    if isinstance(host, Ultrametric):
        host.validate()
        owners = emb.owner_map()
        for leaf in host_copies:
            if owners.get(leaf, -2) != host.owner[leaf]:
                raise InputError(f"leaf {leaf} owner disagrees with the clan map")
    else:
        for c, x in emb.owner_map().items():
            if host.orig[c] != x:
                raise InputError(f"copy {c} belongs to clan {x} but copies vertex {host.orig[c]}")
    return host, emb


def write_json(doc: Any, path: str | Path | None) -> str:
    """Serialize deterministically; writes to ``path`` when given."""
    text = json.dumps(doc, indent=1, ensure_ascii=True, allow_nan=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_json(path: str | Path) -> Any:
    file = Path(path)
    if not file.is_file():
        raise InputError(f"input not found: {path}")
    try:
        return json.loads(file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}") from e


def load_embedding(path: str | Path) -> tuple[Host, ClanEmbedding]:
    return embedding_from_dict(read_json(path))


def load_sequence(path: str | Path) -> list[int]:
    """Whitespace-separated point ids."""
    tokens = [tok for _, text in _read_lines(path) for tok in text.split()]
    try:
        return [int(tok) for tok in tokens]
    except ValueError as e:
        raise InputError(f"{path}: point ids must be integers") from e


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays inside reports to plain Python values."""
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value
