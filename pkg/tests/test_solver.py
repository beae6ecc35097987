import math

import numpy as np
import pytest

from pushcut import (
    Graph,
    SeededProblem,
    SolverParams,
    SolverState,
    berq,
    kkt_violation,
    push,
    qhuber,
    qnorm,
    residual,
    solve,
    volume,
    work_bound,
)

from util import random_connected_graph, random_weighted_graph, to_dense


def triangle():
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)])


def test_param_validation():
    with pytest.raises(ValueError):
        SolverParams(rho=0.0)
    with pytest.raises(ValueError):
        SolverParams(rho=1.0)
    with pytest.raises(ValueError):
        SolverParams(eps=0.0)
    prob = SeededProblem(triangle(), [0], 0.1, 0.0, qnorm(2))
    with pytest.raises(ValueError, match="kappa"):
        SolverState(prob)


def test_first_push_closed_form_q2():
    # raising the seed from 0 solves (1-dx) - dx/gamma = rho*kappa on a
    # triangle: dx = gamma*(1 - rho*kappa)/(1 + gamma)
    prob = SeededProblem(triangle(), [0], 0.1, 0.01, qnorm(2))
    params = SolverParams(rho=0.5, eps=1e-12)
    state = SolverState(prob)
    dx = push(prob, state, 0, params)
    assert dx == pytest.approx(0.1 * (1 - 0.5 * 0.01) / 1.1, abs=1e-11)

    params = SolverParams(rho=0.999999, eps=1e-13)
    state = SolverState(prob)
    dx = push(prob, state, 0, params)
    assert dx == pytest.approx(0.1 * (1 - 0.01) / 1.1, abs=1e-5)


def test_push_requires_violation():
    prob = SeededProblem(triangle(), [0], 0.1, 0.01, qnorm(2))
    state = SolverState(prob)
    with pytest.raises(ValueError, match="violate"):
        push(prob, state, 1, SolverParams())


def test_zero_pushes_when_seeded_everywhere():
    g = triangle()
    prob = SeededProblem(g, [0, 1, 2], 0.1, 1.0, qnorm(2))
    rep = solve(prob)
    assert rep.converged
    assert rep.pushes == 0
    assert rep.x == {}


def test_push_decreases_residual_mass_and_keeps_invariants():
    rng = np.random.default_rng(0)
    g, _ = random_connected_graph(17)
    for loss in (qnorm(1.5), qnorm(2), qnorm(4), qhuber(1.5, 1e-3), berq(1.5, 1e-3)):
        prob = SeededProblem(g, [0, 3], 0.1, 0.01, loss)
        params = SolverParams(rho=0.6, eps=1e-11)
        state = SolverState(prob)
        assert state.g_l1 == pytest.approx(volume(g, [0, 3]))
        for _ in range(200):
            viol = [i for i in range(g.node_count)
                    if state.g[i] > prob.kappa * g.degrees[i]]
            if not viol:
                break
            i = int(rng.choice(viol))
            before = state.g_l1
            xi_before = state.x[i]
            dx = push(prob, state, i, params)
            assert dx > 0
            assert state.x[i] == xi_before + dx
            assert state.g_l1 < before
            assert np.all(state.x >= 0) and np.all(state.x <= 1)
            assert np.all(state.g >= -1e-12)
        assert state.g_l1 == pytest.approx(sum(state.g), abs=1e-9)


def test_solve_converges_and_certifies():
    g, _ = random_connected_graph(23)
    for loss in (qnorm(1.5), qnorm(2), berq(1.5, 1e-3)):
        prob = SeededProblem(g, [1, 4], 0.1, 0.01, loss)
        rep = solve(prob, SolverParams(rho=0.9, eps=1e-11))
        assert rep.converged
        # stopping rule exact on the maintained residual
        for i, gi in rep.g.items():
            assert gi <= prob.kappa * g.degrees[i]
        # incremental residual agrees with recomputation
        full = residual(prob, rep.x)
        keys = set(full) | set(rep.g)
        drift = max(abs(full.get(i, 0.0) - rep.g.get(i, 0.0)) for i in keys)
        assert drift <= 1e-9
        assert kkt_violation(prob, rep.x) <= 1e-9
        # locality: support volume never exceeds accounted work
        assert volume(g, list(rep.x)) <= rep.work + 1e-9


def test_work_bound_values():
    g = triangle()
    # 3b with identity derivative: vol(S)*(1+gamma)/(gamma*(1-rho)*kappa)
    prob = SeededProblem(g, [0], 0.1, 0.01, qnorm(2))
    wb = work_bound(prob, SolverParams(rho=0.5))
    assert wb == pytest.approx(2.0 * 1.1 / (0.1 * 0.5 * 0.01))
    assert wb == pytest.approx(4400.0)
    # 3a with square-root derivative: inverse is the square
    prob = SeededProblem(g, [0], 0.1, 0.01, qnorm(1.5))
    wb = work_bound(prob, SolverParams(rho=0.5))
    arg = 0.1 * 0.5 * 0.01 / (2 ** 0.5 * 1.1)
    assert wb == pytest.approx(2.0 / (0.5 * arg ** 2))
    # rho -> 1 blows up
    assert work_bound(prob, SolverParams(rho=1 - 1e-12)) > 1e20


def test_work_bound_unavailable_below_unit_weights():
    g = Graph.from_edges([(0, 1, 0.5), (1, 2, 1.0)])
    prob = SeededProblem(g, [0], 0.1, 0.01, qnorm(2))
    assert work_bound(prob, SolverParams()) is None
    rep = solve(prob)
    assert rep.work_bound is None
    assert rep.converged


def test_work_respects_bound():
    for seed, loss in [(31, qnorm(1.5)), (32, qnorm(2)), (33, qnorm(4)),
                       (34, qhuber(1.5, 1e-3)), (35, berq(1.5, 1e-3))]:
        g, _ = random_connected_graph(seed)
        prob = SeededProblem(g, [0], 0.1, 0.01, loss)
        params = SolverParams(rho=0.7, eps=1e-10)
        rep = solve(prob, params)
        assert rep.converged
        assert rep.work <= rep.work_bound


def test_determinism():
    g, _ = random_connected_graph(8)
    prob = SeededProblem(g, [2, 5], 0.1, 0.01, qnorm(1.5))
    reps = [solve(prob, SolverParams(rho=0.9, eps=1e-10)) for _ in range(2)]
    assert reps[0].x == reps[1].x
    assert reps[0].g == reps[1].g
    assert reps[0].pushes == reps[1].pushes
    assert reps[0].work == reps[1].work


def test_bracket_heuristic_matches_plain():
    g, _ = random_connected_graph(9)
    for loss in (qnorm(1.25), qnorm(1.5), qnorm(3.0)):
        prob = SeededProblem(g, [0], 0.1, 0.02, loss)
        a = solve(prob, SolverParams(rho=0.9, eps=1e-12, bracket_heuristic=False))
        b = solve(prob, SolverParams(rho=0.9, eps=1e-12, bracket_heuristic=True))
        assert a.converged and b.converged
        keys = set(a.x) | set(b.x)
        diff = max(abs(a.x.get(i, 0.0) - b.x.get(i, 0.0)) for i in keys)
        assert diff <= 1e-6


def test_max_pushes_returns_partial():
    g, _ = random_connected_graph(10, block_size=30)
    prob = SeededProblem(g, [0], 0.1, 0.005, qnorm(1.5))
    rep = solve(prob, SolverParams(rho=0.9, eps=1e-10, max_pushes=5))
    assert not rep.converged
    assert rep.pushes == 5
    assert rep.x  # partial mass was placed


def test_seed_monotonicity_small():
    rng = np.random.default_rng(12)
    for trial in range(5):
        g, _ = random_connected_graph(60 + trial, block_size=15)
        n = g.node_count
        s2 = np.sort(rng.choice(n, size=5, replace=False))
        s1 = np.sort(rng.choice(s2, size=2, replace=False))
        params = SolverParams(rho=0.9999, eps=1e-12)
        x1 = solve(SeededProblem(g, s1, 0.1, 0.01, qnorm(1.5)), params).x
        x2 = solve(SeededProblem(g, s2, 0.1, 0.01, qnorm(1.5)), params).x
        a, b = to_dense(x1, n), to_dense(x2, n)
        assert np.all(a <= b + 1e-4)


def test_weighted_graph_roundtrip_residual():
    g = random_weighted_graph(44)
    prob = SeededProblem(g, [0, 1], 0.2, 0.02, qnorm(1.5))
    rep = solve(prob, SolverParams(rho=0.8, eps=1e-11))
    assert rep.converged
    full = residual(prob, rep.x)
    for i, gi in rep.g.items():
        assert gi == pytest.approx(full.get(i, 0.0), abs=1e-9)
