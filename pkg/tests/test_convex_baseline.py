import itertools

import numpy as np
import pytest

from smpc.channel_model import NOISELESS, build_toeplitz_training, generate_sparse_channel, synthesize_observation
from smpc.convex_baseline import (
    DantzigConfig,
    LinearProgram,
    build_dantzig_lp,
    dantzig_lambda,
    estimate_dantzig,
    solve_simplex,
)
from smpc.errors import ShapeError


def vertex_enumeration(c, A, b, tol=1e-9):
    """Oracle for ``min c@x, A x <= b, x >= 0``: best feasible basic solution or None."""
    m, n = A.shape
    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    best = None
    for rows in itertools.combinations(range(m + n), n):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + tol):
            val = c @ x
            if best is None or val < best:
                best = val
    return best


def random_lp(seed, n=4, m=5):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n))
    b = rng.uniform(-1.0, 3.0, size=m)
    A = np.vstack([A, np.ones(n)])  # sum(x) <= 5 keeps the region bounded
    b = np.append(b, 5.0)
    c = rng.normal(size=n)
    return c, A, b


def test_trivial_lp():
    res = solve_simplex(LinearProgram([1.0], [[1.0]], [1.0], [">="]))
    assert res.status == "optimal"
    assert res.x == pytest.approx([1.0])


def test_objective_only_checked():
    res = solve_simplex(LinearProgram([1.0, 1.0], [[1.0, 1.0]], [2.0], [">="]))
    assert res.objective == pytest.approx(2.0)


def test_equality_rows():
    res = solve_simplex(LinearProgram([1.0, 2.0], [[1.0, 1.0]], [3.0], ["="]))
    assert res.status == "optimal"
    assert res.x == pytest.approx([3.0, 0.0])


def test_infeasible_and_unbounded():
    inf = solve_simplex(LinearProgram([1.0], [[1.0], [1.0]], [1.0, 2.0], ["<=", ">="]))
    assert inf.status == "infeasible"
    unb = solve_simplex(LinearProgram([-1.0, 0.0], [[1.0, -1.0]], [1.0], ["<="]))
    assert unb.status == "unbounded"


def test_pivot_limit_is_reported():
    c, A, b = random_lp(3)
    res = solve_simplex(LinearProgram(c, A, b, "<="), DantzigConfig(simplex_max_pivots=0))
    assert res.status == "pivot_limit" and res.x is None


def test_lp_shape_checks():
    with pytest.raises(ShapeError):
        LinearProgram([1.0, 2.0], [[1.0]], [1.0], "<=")
    with pytest.raises(ShapeError):
        LinearProgram([1.0], [[1.0]], [1.0], ["<"])


@pytest.mark.parametrize("rule", ["bland", "dantzig-bland"])
@pytest.mark.parametrize("seed", range(40))
def test_simplex_matches_vertex_enumeration(seed, rule):
    c, A, b = random_lp(seed)
    oracle = vertex_enumeration(c, A, b)
    res = solve_simplex(LinearProgram(c, A, b, "<="), DantzigConfig(pivot_rule=rule))
    if oracle is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal"
        assert res.objective == pytest.approx(oracle, abs=1e-8)
        assert np.all(A @ res.x <= b + 1e-9) and np.all(res.x >= 0)


def test_degenerate_cycling_example():
    # Beale's example cycles under the largest-coefficient rule without a safeguard
    c = np.array([-0.75, 150.0, -0.02, 6.0])
    A = np.array([[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]])
    b = np.array([0.0, 0.0, 1.0])
    for rule in ("bland", "dantzig-bland"):
        res = solve_simplex(LinearProgram(c, A, b, "<="), DantzigConfig(pivot_rule=rule, degenerate_limit=5))
        assert res.status == "optimal"
        assert res.objective == pytest.approx(-0.05, abs=1e-10)
    never_bland = DantzigConfig(pivot_rule="dantzig-bland", degenerate_limit=10**9, simplex_max_pivots=500)
    assert solve_simplex(LinearProgram(c, A, b, "<="), never_bland).status == "pivot_limit"


def test_dantzig_lp_structure():
    X = np.array([[1.0, 0.5], [0.0, 1.0]])
    lp = build_dantzig_lp(X, np.array([1.0, 2.0]), 0.1)
    assert lp.constraint_matrix.shape == (4, 4)
    assert lp.objective.shape == (4,)


def test_large_lambda_gives_zero():
    X = build_toeplitz_training(10, 20, seed=1)
    y = np.random.default_rng(2).standard_normal(10)
    lam = np.abs(X.matrix.T @ y).max()
    res = solve_simplex(build_dantzig_lp(X, y, lam))
    assert res.objective == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_lp_feasible_points_satisfy_dantzig_constraint(seed):
    rng = np.random.default_rng(seed)
    X = build_toeplitz_training(8, 16, seed=seed).matrix
    y = rng.standard_normal(8)
    lam = 0.3 * np.abs(X.T @ y).max()
    lp = build_dantzig_lp(X, y, lam)
    res = solve_simplex(lp)
    # any LP-feasible point, including the optimum and random convex mixes with it, maps to a DS-feasible h
    for x in (res.x, 0.5 * res.x + 0.5 * solve_simplex(LinearProgram(
            rng.uniform(0, 1, 32), lp.constraint_matrix, lp.constraint_rhs, lp.senses)).x):
        assert np.all(lp.constraint_matrix @ x <= lp.constraint_rhs + 1e-9)
        h = x[:16] - x[16:]
        assert np.abs(X.T @ (y - X @ h)).max() <= lam + 1e-9


def test_dantzig_noiseless_exact():
    h = generate_sparse_channel(30, 3, seed=[1, 0])
    X = build_toeplitz_training(20, 30, seed=[1, 1, 20])
    y = synthesize_observation(X, h, NOISELESS).received
    for debias in (False, True):
        est = estimate_dantzig(X, y, 0.0, 3, DantzigConfig(debias=debias))
        assert np.abs(est.taps - h.taps).max() <= 1e-6


def test_dantzig_zero_observation():
    X = build_toeplitz_training(10, 20, seed=3)
    est = estimate_dantzig(X, np.zeros(10), 0.1, 2)
    assert np.all(est.taps == 0)


@pytest.mark.parametrize("seed", range(10))
def test_dantzig_constraint_holds(seed):
    N = 25
    h = generate_sparse_channel(50, 5, seed=[seed, 0])
    X = build_toeplitz_training(N, 50, seed=[seed, 1, N])
    obs = synthesize_observation(X, h, 10.0, seed=[seed, 2, N])
    sigma = np.sqrt(obs.noise_variance)
    lam = dantzig_lambda(sigma, 50)
    est = estimate_dantzig(X, obs.received, sigma, 5, DantzigConfig(debias=False))
    assert np.abs(X.matrix.T @ (obs.received - X.matrix @ est.taps)).max() <= lam + 1e-8
    assert np.all(np.delete(est.taps, est.support) == 0)


def test_lambda_rule():
    assert dantzig_lambda(0.5, 50) == pytest.approx(0.5 * np.sqrt(2 * np.log(50)))
