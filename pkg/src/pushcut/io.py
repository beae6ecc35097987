"""Flat-file formats: edge lists, seed/community files, solutions, metadata.

All numeric output uses 17 significant digits so doubles round-trip exactly
and golden files stay stable.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def load_graph(path) -> Graph:
    """Parse whitespace-separated ``u v [w]`` lines; ``#`` starts a comment.

    Node ids are 0-indexed integers; weight defaults to 1.0.  Reciprocal
    duplicates merge; contradictory duplicate weights, self-loops and
    nonpositive weights are rejected with the offending line number.
    """
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'u v [w]', got {raw!r}")
            try:
                u = int(parts[0])
                v = int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            try:
                edges.append(_checked_edge(u, v, w))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    try:
        return Graph.from_edges(edges)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def _checked_edge(u, v, w):
    if u < 0 or v < 0:
        raise ValueError(f"negative node id in edge ({u}, {v})")
    if u == v:
        raise ValueError(f"self-loop at node {u}")
    if not w > 0.0:
        raise ValueError(f"edge ({u}, {v}) has nonpositive weight {w}")
    return (u, v, w)


def save_graph(graph: Graph, path) -> None:
    """Write the canonical edge list: ``u v w`` with u < v, sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v, w in graph.edges():
            fh.write(f"{u} {v} {_fmt(w)}\n")


def load_seeds(path) -> np.ndarray:
    ids = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                ids.append(int(line))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: expected one node id, got {raw!r}") from None
    return np.asarray(sorted(set(ids)), dtype=np.int64)


def load_communities(path) -> list[np.ndarray]:
    """One community per line, space-separated node ids."""
    comms = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                ids = sorted(set(int(tok) for tok in line.split()))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad community line {raw!r}") from None
            comms.append(np.asarray(ids, dtype=np.int64))
    if not comms:
        raise ValueError(f"{path}: no communities found")
    return comms


def save_communities(comms, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for comm in comms:
            fh.write(" ".join(str(int(i)) for i in comm) + "\n")


def write_solution(path, x: dict, g: dict) -> None:
    """Support-only rows ``node<TAB>x<TAB>g`` sorted by node id."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in sorted(x):
            fh.write(f"{i}\t{_fmt(x[i])}\t{_fmt(g.get(i, 0.0))}\n")


def read_solution(path):
    x, g = {}, {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'node<TAB>x<TAB>g'")
            i = int(parts[0])
            x[i] = float(parts[1])
            g[i] = float(parts[2])
    return x, g


def write_metadata(path, mapping: dict) -> None:
    """Flat ``key<TAB>value`` document, keys sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(mapping):
            fh.write(f"{key}\t{mapping[key]}\n")


def read_metadata(path) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            if not raw.strip():
                continue
            key, _, value = raw.rstrip("\n").partition("\t")
            out[key] = value
    return out
