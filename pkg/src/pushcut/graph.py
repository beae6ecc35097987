"""Immutable weighted undirected graph in compressed sorted-neighbor form.

Construction canonicalizes edge lists (reciprocal and exact duplicates are
merged, contradictory duplicate weights rejected) and precomputes weighted
degrees.  Set-level metrics (volume, cut, conductance) scan only the rows
of the query set, so their cost is proportional to the set's volume.
"""

from __future__ import annotations

import warnings

import numpy as np


class Graph:
    """CSR-style adjacency with both edge directions stored.

    Attributes:
        node_count: number of nodes n; ids are 0..n-1.
        indptr, indices, weights: neighbor lists, sorted by neighbor id.
        degrees: weighted degree per node, summed in neighbor order.
        total_volume: sum of all degrees (twice the total edge weight).
        is_connected: whether one BFS from node 0 reaches every node.
        min_weight: smallest edge weight (inf for an edgeless graph).
    """

    __slots__ = (
        "node_count",
        "indptr",
        "indices",
        "weights",
        "degrees",
        "total_volume",
        "is_connected",
        "min_weight",
    )

    def __init__(self, node_count, indptr, indices, weights):
        self.node_count = int(node_count)
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        if len(indices):
            rows = np.repeat(np.arange(self.node_count, dtype=np.int64), np.diff(indptr))
            self.degrees = np.bincount(rows, weights=weights, minlength=self.node_count)
            self.min_weight = float(weights.min())
        else:
            self.degrees = np.zeros(self.node_count)
            self.min_weight = float("inf")
        self.total_volume = float(self.degrees.sum())
        self.is_connected = self._bfs_connected()
        for arr in (self.indptr, self.indices, self.weights, self.degrees):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, edges, node_count=None) -> "Graph":
        """Build a graph from (u, v, w) triples (w optional, default 1.0).

        Rejects self-loops, nonpositive or non-finite weights, and pairs that
        appear twice with different weights.  Reciprocal entries (u,v)/(v,u)
        and exact repeats merge into one undirected edge.
        """
        canon = {}
        max_id = -1
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                w = 1.0
            else:
                u, v, w = edge
            u, v, w = int(u), int(v), float(w)
            if u < 0 or v < 0:
                raise ValueError(f"negative node id in edge ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (w > 0.0) or not np.isfinite(w):
                raise ValueError(f"edge ({u}, {v}) has nonpositive weight {w}")
            key = (u, v) if u < v else (v, u)
            prev = canon.get(key)
            if prev is None:
                canon[key] = w
            elif prev != w:
                raise ValueError(
                    f"contradictory duplicate weights {prev} and {w} for edge {key}"
                )
            max_id = max(max_id, u, v)
        n = max_id + 1 if node_count is None else int(node_count)
        if max_id >= n:
            raise ValueError(f"node id {max_id} out of range for node_count={n}")
        if n < 1:
            raise ValueError("graph needs at least one node")

        m2 = 2 * len(canon)
        src = np.empty(m2, dtype=np.int64)
        dst = np.empty(m2, dtype=np.int64)
        wgt = np.empty(m2, dtype=np.float64)
        for pos, ((u, v), w) in enumerate(canon.items()):
            src[2 * pos], dst[2 * pos], wgt[2 * pos] = u, v, w
            src[2 * pos + 1], dst[2 * pos + 1], wgt[2 * pos + 1] = v, u, w
        order = np.lexsort((dst, src))
        src, dst, wgt = src[order], dst[order], wgt[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)

        g = cls(n, indptr, dst, wgt)
        if g.min_weight < 1.0:
            warnings.warn(
                "graph has edge weights below 1; work-bound reporting is disabled",
                stacklevel=2,
            )
        if not g.is_connected:
            warnings.warn(
                "graph is disconnected; diffusions stay within the seed component",
                stacklevel=2,
            )
        return g

    def _bfs_connected(self) -> bool:
        n = self.node_count
        if n <= 1:
            return True
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for j in self.indices[self.indptr[u] : self.indptr[u + 1]]:
                if not seen[j]:
                    seen[j] = True
                    count += 1
                    stack.append(int(j))
        return count == n

    def neighbors(self, i: int):
        """(neighbor ids, weights) views for node i, sorted by id."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edge_count(self) -> int:
        return len(self.indices) // 2

    def edges(self):
        """Iterate canonical (u, v, w) with u < v, sorted."""
        for u in range(self.node_count):
            lo, hi = self.indptr[u], self.indptr[u + 1]
            for j, w in zip(self.indices[lo:hi], self.weights[lo:hi]):
                if u < j:
                    yield int(u), int(j), float(w)

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count()})"


def as_node_set(graph: Graph, ids, allow_empty: bool = False) -> np.ndarray:
    """Validate and canonicalize a node set: sorted unique int64 ids in range."""
    if isinstance(ids, np.ndarray):
        arr = np.unique(ids.astype(np.int64, copy=False))
    else:
        arr = np.unique(np.array(list(ids), dtype=np.int64))
    if arr.size == 0:
        if allow_empty:
            return arr
        raise ValueError("node set is empty")
    if arr[0] < 0 or arr[-1] >= graph.node_count:
        raise ValueError(
            f"node id out of range [0, {graph.node_count}): {arr[0] if arr[0] < 0 else arr[-1]}"
        )
    return arr


def volume(graph: Graph, ids) -> float:
    """Sum of weighted degrees over the set."""
    s = as_node_set(graph, ids, allow_empty=True)
    return float(graph.degrees[s].sum())


def cut(graph: Graph, ids) -> float:
    """Total weight of edges with exactly one endpoint in the set."""
    s = as_node_set(graph, ids, allow_empty=True)
    member = np.zeros(graph.node_count, dtype=bool)
    member[s] = True
    total = 0.0
    for i in s:
        lo, hi = graph.indptr[i], graph.indptr[i + 1]
        nbrs = graph.indices[lo:hi]
        total += float(graph.weights[lo:hi][~member[nbrs]].sum())
    return total


def conductance(graph: Graph, ids) -> float:
    """cut(S) / min(vol(S), vol(complement)); undefined for empty or full S."""
    s = as_node_set(graph, ids)
    if s.size == graph.node_count:
        raise ValueError("conductance undefined for the full node set")
    vol_s = float(graph.degrees[s].sum())
    denom = min(vol_s, graph.total_volume - vol_s)
    if denom <= 0.0:
        raise ValueError("conductance undefined: one side has zero volume")
    return cut(graph, s) / denom
