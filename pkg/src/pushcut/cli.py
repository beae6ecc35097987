"""Command-line surface: gen, solve, oracle, sweep, eval.

Every run writes its full parameter set to a ``.meta`` document so results
replay bit-identically (wallclock fields aside).  Default solver parameters
follow the package-wide defaults: q=1.2, gamma=0.05, kappa=0.005, rho=0.5,
eps=1e-8.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import io
from .backend import BACKEND
from .generators import RNG_ALGORITHM, grid, planted_partition
from .graph import conductance
from .losses import LossSpec, berq, qhuber, qnorm
from .oracle import OracleConvergenceError, OracleParams, oracle_solve
from .problem import SeededProblem, kkt_violation, residual
from .solver import SolverParams, solve
from .sweep import recovery, sweep_cut


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def make_loss(kind: str, q: float, delta: float) -> LossSpec:
    if kind == "qnorm":
        return qnorm(q)
    if kind == "qhuber":
        return qhuber(q, delta)
    if kind == "berq":
        return berq(q, delta)
    raise ValueError(f"unknown loss kind {kind!r}")


@dataclass
class RunConfig:
    graph_path: str
    seeds: np.ndarray
    loss: LossSpec
    gamma: float
    kappa: float
    rho: float
    eps: float
    bracket_heuristic: bool
    max_pushes: int

    def metadata(self) -> dict:
        return {
            "graph": self.graph_path,
            "seeds": " ".join(str(int(i)) for i in self.seeds),
            "loss": self.loss.kind,
            "q": _fmt(self.loss.q),
            "delta": _fmt(self.loss.delta),
            "gamma": _fmt(self.gamma),
            "kappa": _fmt(self.kappa),
            "rho": _fmt(self.rho),
            "eps": _fmt(self.eps),
            "bracket_heuristic": str(int(self.bracket_heuristic)),
            "max_pushes": str(self.max_pushes),
            "backend": BACKEND,
        }


def _add_loss_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--loss", choices=("qnorm", "qhuber", "berq"), default="qnorm")
    p.add_argument("--q", type=float, default=1.2)
    p.add_argument("--delta", type=float, default=1e-5,
                   help="core half-width for qhuber/berq")
    p.add_argument("--gamma", type=float, default=0.05)
    p.add_argument("--kappa", type=float, default=0.005)


def _add_seed_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--seeds", help="file with one seed node id per line")
    group.add_argument("--seed", type=int, action="append",
                       help="seed node id (repeatable)")


def _get_seeds(args) -> np.ndarray:
    if args.seeds:
        return io.load_seeds(args.seeds)
    return np.asarray(sorted(set(args.seed)), dtype=np.int64)


def _cmd_gen(args) -> int:
    if args.kind == "grid":
        g = grid(args.rows, args.cols)
        io.save_graph(g, args.out)
        meta = {
            "generator": "grid",
            "rows": str(args.rows),
            "cols": str(args.cols),
            "nodes": str(g.node_count),
            "edges": str(g.edge_count()),
        }
    else:
        g, truth = planted_partition(args.blocks, args.size, args.p_in,
                                     args.p_out, args.rng_seed)
        io.save_graph(g, args.out)
        if args.communities:
            io.save_communities(truth, args.communities)
        meta = {
            "generator": "planted",
            "blocks": str(args.blocks),
            "block_size": str(args.size),
            "p_in": _fmt(args.p_in),
            "p_out": _fmt(args.p_out),
            "rng_seed": str(args.rng_seed),
            "rng_algorithm": RNG_ALGORITHM,
            "nodes": str(g.node_count),
            "edges": str(g.edge_count()),
        }
    io.write_metadata(args.out + ".meta", meta)
    return 0


def _cmd_solve(args) -> int:
    if args.kappa <= 0.0:
        print("solve: kappa must be positive (strong locality)", file=sys.stderr)
        return 2
    graph = io.load_graph(args.graph)
    cfg = RunConfig(args.graph, _get_seeds(args), make_loss(args.loss, args.q, args.delta),
                    args.gamma, args.kappa, args.rho, args.eps,
                    args.bracket_heuristic, args.max_pushes)
    problem = SeededProblem(graph, cfg.seeds, cfg.gamma, cfg.kappa, cfg.loss)
    params = SolverParams(rho=cfg.rho, eps=cfg.eps, max_pushes=cfg.max_pushes,
                          bracket_heuristic=cfg.bracket_heuristic)
    report = solve(problem, params)
    io.write_solution(args.out + ".solution.tsv", report.x, report.g)
    meta = cfg.metadata()
    meta.update(
        pushes=str(report.pushes),
        work=_fmt(report.work),
        work_bound="unavailable" if report.work_bound is None else _fmt(report.work_bound),
        wallclock=_fmt(report.wallclock),
        converged=str(int(report.converged)),
        support_size=str(len(report.x)),
    )
    io.write_metadata(args.out + ".meta", meta)
    if not report.converged:
        print(f"solve: push budget exhausted after {report.pushes} pushes; "
              "partial solution written", file=sys.stderr)
        return 1
    return 0


def _cmd_oracle(args) -> int:
    graph = io.load_graph(args.graph)
    loss = make_loss(args.loss, args.q, args.delta)
    problem = SeededProblem(graph, _get_seeds(args), args.gamma, args.kappa, loss)
    params = OracleParams(tol=args.tol, max_sweeps=args.max_sweeps,
                          coord_tol=args.coord_tol)
    try:
        x = oracle_solve(problem, params)
    except OracleConvergenceError as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return 1
    g = residual(problem, x)
    io.write_solution(args.out + ".solution.tsv", x, g)
    meta = {
        "graph": args.graph,
        "seeds": " ".join(str(int(i)) for i in problem.seeds),
        "loss": loss.kind,
        "q": _fmt(loss.q),
        "delta": _fmt(loss.delta),
        "gamma": _fmt(args.gamma),
        "kappa": _fmt(args.kappa),
        "tol": _fmt(args.tol),
        "coord_tol": _fmt(args.coord_tol),
        "max_sweeps": str(args.max_sweeps),
        "kkt_violation": _fmt(kkt_violation(problem, x)),
        "support_size": str(len(x)),
        "backend": BACKEND,
    }
    io.write_metadata(args.out + ".meta", meta)
    return 0


def _cmd_sweep(args) -> int:
    graph = io.load_graph(args.graph)
    x, _ = io.read_solution(args.solution)
    result = sweep_cut(graph, x, mode=args.mode)
    with open(args.out + ".sweep.tsv", "w", encoding="utf-8") as fh:
        for rank, (i, phi) in enumerate(zip(result.order, result.conductances), 1):
            fh.write(f"{rank}\t{i}\t{_fmt(x[int(i)])}\t{_fmt(phi)}\n")
    with open(args.out + ".best.txt", "w", encoding="utf-8") as fh:
        for i in result.best_set:
            fh.write(f"{i}\n")
    print(f"best prefix {result.best_prefix} nodes, "
          f"conductance {result.best_conductance:.6g}")
    return 0


def _eval_one_trial(graph, comm, ci, trial, args, loss):
    rng = np.random.default_rng([args.rng_seed, ci, trial])
    n_seeds = max(1, round(args.seed_fraction * len(comm)))
    seeds = np.sort(rng.choice(comm, size=n_seeds, replace=False))
    problem = SeededProblem(graph, seeds, args.gamma, args.kappa, loss)
    params = SolverParams(rho=args.rho, eps=args.eps, max_pushes=args.max_pushes,
                          bracket_heuristic=args.bracket_heuristic)
    t0 = time.perf_counter()
    report = solve(problem, params)
    result = sweep_cut(graph, report.x, mode=args.sweep_mode)
    elapsed = time.perf_counter() - t0
    score = recovery(comm, result.best_set)
    return {
        "community": ci,
        "trial": trial,
        "n_seeds": n_seeds,
        "precision": score.precision,
        "recall": score.recall,
        "f1": score.f1,
        "conductance": result.best_conductance,
        "set_size": len(result.best_set),
        "pushes": report.pushes,
        "work": report.work,
        "converged": int(report.converged),
        "seconds": elapsed,
    }


def _cmd_eval(args) -> int:
    if args.kappa <= 0.0:
        print("eval: kappa must be positive", file=sys.stderr)
        return 2
    graph = io.load_graph(args.graph)
    comms = io.load_communities(args.communities)
    loss = make_loss(args.loss, args.q, args.delta)
    for ci, comm in enumerate(comms):
        if len(comm) == 0:
            print(f"eval: community {ci} is empty", file=sys.stderr)
            return 2
        if len(comm) >= graph.node_count:
            print(f"eval: community {ci} covers the whole graph; no valid sweep",
                  file=sys.stderr)
            return 2

    jobs = []
    for ci, comm in enumerate(comms):
        for trial in range(args.trials):
            jobs.append((ci, comm, trial))
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(
                lambda job: _eval_one_trial(graph, job[1], job[0], job[2], args, loss),
                jobs))
    else:
        rows = [_eval_one_trial(graph, comm, ci, trial, args, loss)
                for ci, comm, trial in jobs]
    rows.sort(key=lambda r: (r["community"], r["trial"]))

    trial_cols = ("community", "trial", "n_seeds", "precision", "recall", "f1",
                  "conductance", "set_size", "pushes", "work", "converged")
    with open(args.out + ".trials.tsv", "w", encoding="utf-8") as fh:
        fh.write("# " + "\t".join(trial_cols) + "\n")
        for r in rows:
            fh.write("\t".join(
                _fmt(r[c]) if isinstance(r[c], float) else str(r[c])
                for c in trial_cols) + "\n")
    with open(args.out + ".timings.tsv", "w", encoding="utf-8") as fh:
        fh.write("# community\ttrial\tseconds\n")
        for r in rows:
            fh.write(f"{r['community']}\t{r['trial']}\t{_fmt(r['seconds'])}\n")

    with open(args.out + ".summary.tsv", "w", encoding="utf-8") as fh:
        fh.write("# community\tmedian_f1\tq20_f1\tq80_f1\tmedian_conductance"
                 "\tq20_conductance\tq80_conductance\tmedian_precision\tmedian_recall\n")
        for ci in range(len(comms)):
            f1s = np.array([r["f1"] for r in rows if r["community"] == ci])
            phis = np.array([r["conductance"] for r in rows if r["community"] == ci])
            precs = np.array([r["precision"] for r in rows if r["community"] == ci])
            recs = np.array([r["recall"] for r in rows if r["community"] == ci])
            cells = [str(ci)]
            cells += [_fmt(v) for v in (np.median(f1s),
                                        np.quantile(f1s, 0.2), np.quantile(f1s, 0.8),
                                        np.median(phis),
                                        np.quantile(phis, 0.2), np.quantile(phis, 0.8),
                                        np.median(precs), np.median(recs))]
            fh.write("\t".join(cells) + "\n")

    meta = {
        "graph": args.graph,
        "communities": args.communities,
        "loss": loss.kind,
        "q": _fmt(loss.q),
        "delta": _fmt(loss.delta),
        "gamma": _fmt(args.gamma),
        "kappa": _fmt(args.kappa),
        "rho": _fmt(args.rho),
        "eps": _fmt(args.eps),
        "bracket_heuristic": str(int(args.bracket_heuristic)),
        "max_pushes": str(args.max_pushes),
        "sweep_mode": args.sweep_mode,
        "seed_fraction": _fmt(args.seed_fraction),
        "trials": str(args.trials),
        "rng_seed": str(args.rng_seed),
        "rng_algorithm": RNG_ALGORITHM,
        "jobs": str(args.jobs),
        "backend": BACKEND,
        "total_seconds": _fmt(sum(r["seconds"] for r in rows)),
    }
    io.write_metadata(args.out + ".meta", meta)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pushcut",
        description="Strongly local graph clustering with nonlinear push solvers",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic graph")
    gensub = gen.add_subparsers(dest="kind", required=True)
    ggrid = gensub.add_parser("grid", help="axis-aligned grid, unit weights")
    ggrid.add_argument("--rows", type=int, required=True)
    ggrid.add_argument("--cols", type=int, required=True)
    ggrid.add_argument("--out", required=True)
    ggrid.set_defaults(func=_cmd_gen)
    gpp = gensub.add_parser("planted", help="planted-partition block graph")
    gpp.add_argument("--blocks", type=int, default=2)
    gpp.add_argument("--size", type=int, required=True, help="nodes per block")
    gpp.add_argument("--p-in", type=float, required=True)
    gpp.add_argument("--p-out", type=float, required=True)
    gpp.add_argument("--rng-seed", type=int, default=0)
    gpp.add_argument("--out", required=True)
    gpp.add_argument("--communities", help="also write the block ground truth here")
    gpp.set_defaults(func=_cmd_gen)

    so = sub.add_parser("solve", help="run the push solver")
    so.add_argument("--graph", required=True)
    _add_seed_args(so)
    _add_loss_args(so)
    so.add_argument("--rho", type=float, default=0.5)
    so.add_argument("--eps", type=float, default=1e-8)
    so.add_argument("--bracket-heuristic", action="store_true")
    so.add_argument("--max-pushes", type=int, default=10_000_000)
    so.add_argument("--out", required=True, help="output prefix")
    so.set_defaults(func=_cmd_solve)

    orc = sub.add_parser("oracle", help="dense reference solve (small graphs)")
    orc.add_argument("--graph", required=True)
    _add_seed_args(orc)
    _add_loss_args(orc)
    orc.add_argument("--tol", type=float, default=1e-12)
    orc.add_argument("--coord-tol", type=float, default=1e-15)
    orc.add_argument("--max-sweeps", type=int, default=1_000_000)
    orc.add_argument("--out", required=True, help="output prefix")
    orc.set_defaults(func=_cmd_oracle)

    sw = sub.add_parser("sweep", help="sweep-cut a solution file")
    sw.add_argument("--graph", required=True)
    sw.add_argument("--solution", required=True)
    sw.add_argument("--mode", choices=("plain", "degree_normalized"), default="plain")
    sw.add_argument("--out", required=True, help="output prefix")
    sw.set_defaults(func=_cmd_sweep)

    ev = sub.add_parser("eval", help="seeded recovery trials against communities")
    ev.add_argument("--graph", required=True)
    ev.add_argument("--communities", required=True)
    _add_loss_args(ev)
    ev.add_argument("--rho", type=float, default=0.5)
    ev.add_argument("--eps", type=float, default=1e-8)
    ev.add_argument("--bracket-heuristic", action="store_true")
    ev.add_argument("--max-pushes", type=int, default=10_000_000)
    ev.add_argument("--sweep-mode", choices=("plain", "degree_normalized"),
                    default="degree_normalized")
    ev.add_argument("--seed-fraction", type=float, default=0.01)
    ev.add_argument("--trials", type=int, default=20)
    ev.add_argument("--rng-seed", type=int, default=0)
    ev.add_argument("--jobs", type=int, default=1)
    ev.add_argument("--out", required=True, help="output prefix")
    ev.set_defaults(func=_cmd_eval)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
