"""Dense reference solver for validating the push solver on small graphs.

Independently implemented route to the same optimum: cyclic exact
coordinate minimization over every node (no queue, no residual
maintenance), each coordinate set by bisection on its one-dimensional
stationarity condition.  kappa = 0 is allowed here, unlike the push solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .problem import SeededProblem, _check_solution

_MAX_NODES = 10_000


class OracleConvergenceError(RuntimeError):
    """Sweeps stopped above the requested certificate.

    ``violation`` is the best achieved optimality gap and ``x`` the iterate
    that achieved it; a caller that can live with the looser certificate may
    use them (the gap typically sits at the double-precision floor of the
    instance rather than shrinking with more sweeps).
    """

    def __init__(self, sweeps, violation, x):
        super().__init__(
            f"coordinate sweeps stopped after {sweeps} sweeps with "
            f"optimality violation {violation:.3e}"
        )
        self.sweeps = sweeps
        self.violation = violation
        self.x = x


@dataclass(frozen=True)
class OracleParams:
    tol: float = 1e-12
    max_sweeps: int = 1_000_000
    coord_tol: float = 1e-15

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if not self.coord_tol > 0.0:
            raise ValueError("coord_tol must be positive")


def oracle_solve(problem: SeededProblem, params: OracleParams | None = None,
                 x0: dict | None = None) -> dict:
    """Solve to first-order optimality within params.tol; returns a sparse map.

    On return every node either sits at 0 with residual at most kappa*d + tol,
    or carries positive mass with |residual - kappa*d| <= tol.  ``x0`` warm
    starts the sweeps (values in [0, 1]); the optimum reached is the same,
    warm starts only cut the sweep count.
    """
    if params is None:
        params = OracleParams()
    g = problem.graph
    if g.node_count > _MAX_NODES:
        raise ValueError(
            f"dense oracle is limited to {_MAX_NODES} nodes, got {g.node_count}"
        )
    x = np.zeros(g.node_count)
    if x0:
        _check_solution(problem, x0)
        for i, v in x0.items():
            x[i] = v
    out = np.zeros(3)
    kernels.oracle_run(
        g.indptr, g.indices, g.weights, g.degrees, problem.seed_mask,
        problem.loss.kind_code, problem.loss.q, problem.loss.delta,
        problem.gamma, problem.kappa, params.tol, params.coord_tol,
        params.max_sweeps, x, out,
    )
    support = np.nonzero(x)[0]
    result = {int(i): float(x[i]) for i in support}
    if out[1] != 1.0:
        raise OracleConvergenceError(int(out[0]), float(out[2]), result)
    return result


def oracle_compare(problem: SeededProblem, a: dict, b: dict) -> float:
    """Infinity-norm difference over the union of supports."""
    _check_solution(problem, a)
    _check_solution(problem, b)
    worst = 0.0
    for i in set(a) | set(b):
        d = abs(a.get(i, 0.0) - b.get(i, 0.0))
        if d > worst:
            worst = d
    return worst
