"""Shared helpers for the test suite."""

import warnings

import numpy as np

from pushcut import Graph, planted_partition


def random_connected_graph(rng_seed, block_size=10, p_in=0.3, p_out=0.05, blocks=2):
    """Planted-partition graph, redrawing the seed until connected."""
    seed = rng_seed
    while True:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g, truth = planted_partition(blocks, block_size, p_in, p_out, seed)
        if g.is_connected:
            return g, truth
        seed += 10_000


def random_weighted_graph(rng_seed, block_size=10, w_low=1.0, w_high=3.0):
    """Connected graph with random weights in [w_low, w_high]."""
    g, _ = random_connected_graph(rng_seed, block_size=block_size)
    rng = np.random.default_rng(rng_seed + 77)
    edges = [(u, v, float(np.round(rng.uniform(w_low, w_high), 3)))
             for u, v, _ in g.edges()]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Graph.from_edges(edges, node_count=g.node_count)


def dense_adjacency(g):
    A = np.zeros((g.node_count, g.node_count))
    for u, v, w in g.edges():
        A[u, v] = A[v, u] = w
    return A


def linear_reference(g, seeds, gamma):
    """Dense solve of (gamma*D + L) x = gamma*D e_S; the q=2, kappa=0 optimum."""
    A = dense_adjacency(g)
    D = np.diag(g.degrees)
    L = D - A
    e = np.zeros(g.node_count)
    e[np.asarray(seeds, dtype=np.int64)] = 1.0
    return np.linalg.solve(gamma * D + L, gamma * (D @ e))


def to_dense(x, n):
    out = np.zeros(n)
    for i, v in x.items():
        out[i] = v
    return out
