"""Deterministic synthetic graphs for tests and desk-scale experiments.

Random generation uses numpy's PCG64 generator seeded explicitly, so a
spec reproduces byte-identically across platforms; outputs record the
algorithm id ("pcg64").
"""

from __future__ import annotations

import numpy as np

from .graph import Graph

RNG_ALGORITHM = "pcg64"


def grid(rows: int, cols: int) -> Graph:
    """Unit-weight grid with 4 axis-aligned neighbors; rows*cols >= 2."""
    rows, cols = int(rows), int(cols)
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs rows*cols >= 2")
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1, 1.0))
            if r + 1 < rows:
                edges.append((i, i + cols, 1.0))
    return Graph.from_edges(edges, node_count=rows * cols)


def grid_boundary(rows: int, cols: int) -> np.ndarray:
    """Node ids on the outer frame of the grid."""
    ids = [
        r * cols + c
        for r in range(rows)
        for c in range(cols)
        if r in (0, rows - 1) or c in (0, cols - 1)
    ]
    return np.asarray(sorted(set(ids)), dtype=np.int64)


def planted_partition(blocks: int, block_size: int, p_in: float, p_out: float,
                      rng_seed: int):
    """Random block graph: intra-block edges with p_in, inter-block with p_out.

    After sampling, every block is repaired to be internally connected by
    wiring each stray component (isolated nodes included) to a random node
    of the block's main component.  Returns (graph, list of block node sets).
    """
    blocks, block_size = int(blocks), int(block_size)
    if blocks < 2 or block_size < 1:
        raise ValueError("need at least 2 blocks of at least 1 node")
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {p}")
    if p_in <= p_out:
        raise ValueError("planted structure requires p_in > p_out")
    rng = np.random.default_rng(rng_seed)
    n = blocks * block_size

    edges = []
    for b in range(blocks):
        base = b * block_size
        iu, ju = np.triu_indices(block_size, k=1)
        mask = rng.random(iu.size) < p_in
        for u, v in zip(iu[mask], ju[mask]):
            edges.append((base + int(u), base + int(v), 1.0))
    for b1 in range(blocks):
        for b2 in range(b1 + 1, blocks):
            draws = rng.random(block_size * block_size) < p_out
            hits = np.nonzero(draws)[0]
            for h in hits:
                u = b1 * block_size + int(h // block_size)
                v = b2 * block_size + int(h % block_size)
                edges.append((u, v, 1.0))

    # repair pass: connect intra-block components so each block is one piece
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for u, v, _ in edges:
        if u // block_size == v // block_size:
            union(u, v)
    for b in range(blocks):
        base = b * block_size
        comps = {}
        for i in range(base, base + block_size):
            comps.setdefault(find(i), []).append(i)
        groups = sorted(comps.values(), key=lambda grp: grp[0])
        pool = list(groups[0])
        for grp in groups[1:]:
            a = int(rng.choice(grp))
            c = int(rng.choice(pool))
            edges.append((min(a, c), max(a, c), 1.0))
            pool.extend(grp)

    graph = Graph.from_edges(edges, node_count=n)
    truth = [np.arange(b * block_size, (b + 1) * block_size, dtype=np.int64)
             for b in range(blocks)]
    return graph, truth
