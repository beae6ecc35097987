"""Sweep cuts over solution vectors and cluster-recovery metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, as_node_set

MODES = ("plain", "degree_normalized")


@dataclass
class SweepResult:
    order: np.ndarray           # support sorted by score descending, ids ascending on ties
    conductances: np.ndarray    # conductance of each prefix of order
    best_prefix: int            # number of nodes in the best prefix
    best_set: np.ndarray
    best_conductance: float


@dataclass(frozen=True)
class RecoveryScore:
    precision: float
    recall: float
    f1: float


def _ranked_support(graph: Graph, x: dict, mode: str) -> list[int]:
    if mode not in MODES:
        raise ValueError(f"unknown sweep mode {mode!r}")
    deg = graph.degrees
    support = [i for i, v in x.items() if v > 0.0]
    if not support:
        raise ValueError("sweep needs at least one positive entry")
    if mode == "plain":
        return sorted(support, key=lambda i: (-x[i], i))
    return sorted(support, key=lambda i: (-x[i] / deg[i], i))


def sweep_cut(graph: Graph, x: dict, mode: str = "plain") -> SweepResult:
    """Rank the support of x and return the minimum-conductance prefix.

    Zero entries never enter the ranking; ties break toward the smaller node
    id.  The conductance profile is maintained incrementally, one volume and
    cut update per admitted node, so the sweep costs O(vol(support)).
    """
    order = _ranked_support(graph, x, mode)
    if len(order) >= graph.node_count:
        raise ValueError("support covers every node; no valid cut to sweep")
    indptr, indices, weights, deg = graph.indptr, graph.indices, graph.weights, graph.degrees
    total = graph.total_volume
    member = np.zeros(graph.node_count, dtype=bool)
    conductances = np.empty(len(order))
    vol = 0.0
    cut = 0.0
    for t, i in enumerate(order):
        w_in = 0.0
        for ptr in range(indptr[i], indptr[i + 1]):
            if member[indices[ptr]]:
                w_in += weights[ptr]
        cut = cut + (deg[i] - 2.0 * w_in)
        vol = vol + deg[i]
        member[i] = True
        denom = min(vol, total - vol)
        conductances[t] = cut / denom if denom > 0.0 else math.inf
    best = int(np.argmin(conductances))
    return SweepResult(
        order=np.asarray(order, dtype=np.int64),
        conductances=conductances,
        best_prefix=best + 1,
        best_set=np.sort(np.asarray(order[: best + 1], dtype=np.int64)),
        best_conductance=float(conductances[best]),
    )


def recovery(target, found) -> RecoveryScore:
    """Precision/recall/F1 of a found node set against a nonempty target."""
    target = np.asarray(sorted(set(int(i) for i in target)), dtype=np.int64)
    found = np.asarray(sorted(set(int(i) for i in found)), dtype=np.int64)
    if target.size == 0:
        raise ValueError("target set is empty")
    if found.size == 0:
        return RecoveryScore(0.0, 0.0, 0.0)
    hits = np.intersect1d(target, found, assume_unique=True).size
    precision = hits / found.size
    recall = hits / target.size
    f1 = 0.0 if hits == 0 else 2.0 * precision * recall / (precision + recall)
    return RecoveryScore(precision, recall, f1)


def recall_at_k(x: dict, target, ks, mode: str = "plain",
                graph: Graph | None = None) -> list[float]:
    """Recall of the top-k scored nodes against the target, for each k.

    Degree normalization needs the graph; ks must be positive and ascending.
    k beyond the support size saturates at the full-support recall.
    """
    ks = list(ks)
    if any(k <= 0 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("ks must be positive and strictly ascending")
    if mode == "degree_normalized":
        if graph is None:
            raise ValueError("degree_normalized ranking needs the graph")
        order = _ranked_support(graph, x, mode)
    else:
        support = [i for i, v in x.items() if v > 0.0]
        if not support:
            raise ValueError("recall needs at least one positive entry")
        order = sorted(support, key=lambda i: (-x[i], i))
    tset = set(int(i) for i in target)
    if not tset:
        raise ValueError("target set is empty")
    out = []
    hits = 0
    pos = 0
    for k in ks:
        while pos < min(k, len(order)):
            if order[pos] in tset:
                hits += 1
            pos += 1
        out.append(hits / len(tset))
    return out
