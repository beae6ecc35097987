"""Seeded cut problem: the objective, its residual, and the optimality gap.

The problem couples a graph to a seed set through implicit source/sink
edges: every seed i is tied to value 1 with weight gamma*d_i, every
non-seed to value 0 with the same weight, and a kappa*gamma*d^T x term
prices mass.  Those auxiliary edges are never materialized; the seed
indicator and degree vector are all the formulas need.

Solutions are sparse maps ``{node: value}`` with values in [0, 1]; absent
nodes are 0.  ``residual`` here recomputes from scratch and serves as the
correctness reference for the solver's incremental bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, as_node_set
from .losses import LossSpec


@dataclass(frozen=True)
class SeededProblem:
    graph: Graph
    seeds: np.ndarray
    gamma: float
    kappa: float
    loss: LossSpec
    seed_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seeds = as_node_set(self.graph, self.seeds)
        object.__setattr__(self, "seeds", seeds)
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")
        mask = np.zeros(self.graph.node_count, dtype=np.uint8)
        mask[seeds] = 1
        mask.flags.writeable = False
        object.__setattr__(self, "seed_mask", mask)

    @property
    def seed_volume(self) -> float:
        return float(self.graph.degrees[self.seeds].sum())


def _check_solution(problem: SeededProblem, x: dict) -> None:
    n = problem.graph.node_count
    for i, v in x.items():
        if not 0 <= i < n:
            raise ValueError(f"solution key {i} out of range")
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"solution value out of [0, 1] at node {i}: {v}")


def objective(problem: SeededProblem, x: dict) -> float:
    """Loss over graph edges and implicit seed/sink edges plus the mass price.

    Touches only the support of x and the seed set, so the cost scales with
    the solution, not the graph.
    """
    _check_solution(problem, x)
    g, loss = problem.graph, problem.loss
    gamma, kappa = problem.gamma, problem.kappa
    deg = g.degrees
    total = 0.0
    for i, xi in x.items():
        lo, hi = g.indptr[i], g.indptr[i + 1]
        for ptr in range(lo, hi):
            j = int(g.indices[ptr])
            xj = x.get(j)
            if xj is None:
                total += float(g.weights[ptr]) * loss.value(xi)
            elif i < j:
                total += float(g.weights[ptr]) * loss.value(xi - xj)
        if not problem.seed_mask[i]:
            total += gamma * float(deg[i]) * loss.value(xi)
        total += kappa * gamma * float(deg[i]) * xi
    for i in problem.seeds:
        total += gamma * float(deg[i]) * loss.value(x.get(int(i), 0.0) - 1.0)
    return total


def residual(problem: SeededProblem, x: dict) -> dict:
    """Scaled negative gradient per node, recomputed exactly from x.

    Returns the nonzero entries only; every node outside the support, its
    neighborhood, and the seed set has residual 0 (or -kappa*d in the
    optimality comparison, which never stores).
    """
    _check_solution(problem, x)
    g, loss = problem.graph, problem.loss
    gamma = problem.gamma
    deg = g.degrees
    touched = set(x)
    for i in x:
        lo, hi = g.indptr[i], g.indptr[i + 1]
        touched.update(int(j) for j in g.indices[lo:hi])
    touched.update(int(i) for i in problem.seeds)
    out = {}
    for i in sorted(touched):
        acc = 0.0
        xi = x.get(i, 0.0)
        lo, hi = g.indptr[i], g.indptr[i + 1]
        for ptr in range(lo, hi):
            acc += float(g.weights[ptr]) * loss.deriv(xi - x.get(int(g.indices[ptr]), 0.0))
        e = 1.0 if problem.seed_mask[i] else 0.0
        gi = -acc / gamma - float(deg[i]) * loss.deriv(xi - e)
        if gi != 0.0:
            out[i] = gi
    return out


def kkt_violation(problem: SeededProblem, x: dict) -> float:
    """Largest degree-normalized residual excess over kappa*d; 0 means optimal
    within the solver's stopping rule."""
    res = residual(problem, x)
    deg = problem.graph.degrees
    worst = 0.0
    for i, gi in res.items():
        v = (gi - problem.kappa * float(deg[i])) / float(deg[i])
        if v > worst:
            worst = v
    return worst
