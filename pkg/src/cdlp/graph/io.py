from __future__ import annotations

import logging
import os
import re
from typing import Iterator

from cdlp.errors import EmptyGraphError, ParseError
from cdlp.graph.core import Graph, Partition, build_graph

log = logging.getLogger(__name__)

NODES_HEADER = re.compile(r"^#\s*nodes\s*:\s*(\d+)\s*$", re.IGNORECASE)


def _parse_int(token: str, path: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected a non-negative integer id, got {token!r}", path, lineno) from None
    if value < 0:
        raise ParseError(f"negative node id {value}", path, lineno)
    return value


def _text_lines(path: str) -> Iterator[tuple[int, str]]:
    """Numbered, stripped lines of a UTF-8 text file; bad bytes are a parse error on their line."""
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            try:
                yield lineno, raw.decode("utf-8").strip()
            except UnicodeDecodeError:
                raise ParseError("line is not valid UTF-8", path, lineno) from None


def read_edge_list(path: str) -> Graph:
    """
    Edge list: one `a b` pair per line, '#' comments ignored, duplicates tolerated.
    A `# nodes: N` header fixes the node count; otherwise N = max id + 1.
    """
    declared_n: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, line in _text_lines(path):
        if not line:
            continue
        if line.startswith("#"):
            m = NODES_HEADER.match(line)
            if m:
                declared_n = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, found {len(parts)}", path, lineno)
        a = _parse_int(parts[0], path, lineno)
        b = _parse_int(parts[1], path, lineno)
        if a == b:
            raise ParseError(f"self-loop ({a}, {a})", path, lineno)
        if declared_n is not None and max(a, b) >= declared_n:
            raise ParseError(f"id {max(a, b)} exceeds declared node count {declared_n}", path, lineno)
        edges.append((a, b))

    n = declared_n if declared_n is not None else (max((max(e) for e in edges), default=-1) + 1)
    if n < 1:
        raise EmptyGraphError()
    g = build_graph(n, edges)
    log.debug("read %s: N=%d M=%d", path, g.node_count, g.edge_count)
    return g


def write_edge_list(g: Graph, path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"# nodes: {g.node_count}\n")
        f.write(f"# edges: {g.edge_count}\n")
        for a, b in g.edges():
            f.write(f"{a} {b}\n")


def read_communities(path: str, n: int | None = None) -> Partition:
    """Community file: lines of `node-id community-id`; community ids may be any token."""
    labels: dict[int, str] = {}
    for lineno, line in _text_lines(path):
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, found {len(parts)}", path, lineno)
        node = _parse_int(parts[0], path, lineno)
        if node in labels and labels[node] != parts[1]:
            raise ParseError(f"node {node} listed in two communities", path, lineno)
        labels[node] = parts[1]

    size = n if n is not None else (max(labels, default=-1) + 1)
    missing = [v for v in range(size) if v not in labels]
    if missing:
        raise ParseError(f"{len(missing)} nodes have no community (first: {missing[:5]})", path)
    extra = [v for v in labels if v >= size]
    if extra:
        raise ParseError(f"node ids beyond graph size {size}: {sorted(extra)[:5]}", path)
    return Partition.from_labels(labels[v] for v in range(size))


def write_communities(p: Partition, path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for v, c in enumerate(p.assignment):
            f.write(f"{v} {c}\n")
