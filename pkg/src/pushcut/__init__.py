"""Strongly local graph clustering via nonlinear push solvers.

Solves seeded q-norm cut diffusion problems whose runtime scales with the
output rather than the graph, extracts low-conductance clusters by sweep
cut, and ships a dense coordinate-descent oracle for verification.
"""

from .backend import BACKEND
from .generators import grid, planted_partition
from .graph import Graph, conductance, cut, volume
from .losses import LossSpec, berq, qhuber, qnorm
from .oracle import OracleConvergenceError, OracleParams, oracle_compare, oracle_solve
from .problem import SeededProblem, kkt_violation, objective, residual
from .solver import SolveReport, SolverParams, SolverState, push, solve, work_bound
from .sweep import RecoveryScore, SweepResult, recall_at_k, recovery, sweep_cut

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Graph",
    "LossSpec",
    "OracleConvergenceError",
    "OracleParams",
    "RecoveryScore",
    "SeededProblem",
    "SolveReport",
    "SolverParams",
    "SolverState",
    "SweepResult",
    "berq",
    "conductance",
    "cut",
    "grid",
    "kkt_violation",
    "objective",
    "oracle_compare",
    "oracle_solve",
    "planted_partition",
    "push",
    "qhuber",
    "qnorm",
    "recall_at_k",
    "recovery",
    "residual",
    "solve",
    "sweep_cut",
    "volume",
    "work_bound",
]
