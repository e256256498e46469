import itertools

import numpy as np
import pytest

from smpc.channel_model import NOISELESS, build_toeplitz_training, generate_sparse_channel, synthesize_observation
from smpc.errors import OverdeterminedSupportError, SingularSupportError
from smpc.estimators import (
    CosampConfig,
    estimate_cosamp,
    estimate_ls,
    estimate_omp,
    estimate_oracle_ls,
)


def best_sparse_ls(A, y, S):
    """Exhaustive oracle: least squares on every S-subset, keep the smallest residual."""
    best = None
    for sup in itertools.combinations(range(A.shape[1]), S):
        u, *_ = np.linalg.lstsq(A[:, sup], y, rcond=None)
        r = np.linalg.norm(y - A[:, sup] @ u)
        if best is None or r < best[0]:
            best = (r, sup, u)
    h = np.zeros(A.shape[1])
    h[list(best[1])] = best[2]
    return h


def gaussian_unit_columns(seed, N=6, L=8):
    A = np.random.default_rng([seed, 5]).standard_normal((N, L))
    return A / np.linalg.norm(A, axis=0)


def test_cosamp_identity_one_iteration():
    h = np.zeros(10)
    h[[1, 4, 7]] = [0.5, -1.0, 0.3]
    est = estimate_cosamp(np.eye(10), h, CosampConfig(3))
    np.testing.assert_array_equal(est.taps, h)
    assert est.iterations == 1
    np.testing.assert_array_equal(est.support, [1, 4, 7])


def test_cosamp_matches_exhaustive_oracle():
    converged = 0
    for seed in range(40):
        A = gaussian_unit_columns(seed)
        h = generate_sparse_channel(8, 2, seed=[seed, 0])
        y = A @ h.taps
        est = estimate_cosamp(A, y, 2)
        if est.residual_norms[-1] <= 1e-10 * np.linalg.norm(y):
            converged += 1
            assert np.abs(est.taps - best_sparse_ls(A, y, 2)).max() <= 1e-8
    # frozen from the exhaustive comparison on these 40 draws
    assert converged == 36


def test_cosamp_config_defaults():
    cfg = CosampConfig(5)
    assert cfg.max_iterations == 20 and cfg.halt_tolerance == 1e-4
    with pytest.raises(ValueError):
        CosampConfig(0)


def test_cosamp_overdetermined_support():
    A = np.random.default_rng(0).standard_normal((5, 20))
    with pytest.raises(OverdeterminedSupportError):
        estimate_cosamp(A, np.ones(5), 3)


def test_cosamp_singular_support_reports_columns():
    A = np.random.default_rng(0).standard_normal((8, 12))
    A[:, 1] = A[:, 0]
    y = A[:, 0] + 0.5 * A[:, 5]
    with pytest.raises(SingularSupportError) as info:
        estimate_cosamp(A, y, 2)
    assert {0, 1} <= set(info.value.support)


@pytest.mark.parametrize("seed", range(20))
def test_cosamp_invariants(seed):
    N = 20 + seed
    h = generate_sparse_channel(50, 5, seed=[seed, 0])
    X = build_toeplitz_training(N, 50, seed=[seed, 1, N])
    y = synthesize_observation(X, h, 10.0, seed=[seed, 2, N]).received
    est = estimate_cosamp(X, y, 5)
    assert 1 <= est.iterations <= 20
    assert len(est.residual_norms) == est.iterations
    assert all(r >= 0 for r in est.residual_norms)
    assert np.all(np.delete(est.taps, est.support) == 0)
    assert est.support.size == 5
    again = estimate_cosamp(X, y, 5)
    assert again.taps.tobytes() == est.taps.tobytes()


def test_cosamp_noiseless_residual():
    h = generate_sparse_channel(50, 5, seed=[3, 0])
    X = build_toeplitz_training(40, 50, seed=[3, 1, 40])
    y = X.matrix @ h.taps
    est = estimate_cosamp(X, y, 5)
    np.testing.assert_array_equal(est.support, h.support)
    assert est.residual_norms[-1] <= 1e-10 * np.linalg.norm(y)


def test_omp_identity():
    h = np.zeros(8)
    h[[2, 5]] = [1.0, -0.4]
    est = estimate_omp(np.eye(8), h, 2)
    np.testing.assert_array_equal(est.taps, h)
    assert est.iterations == 2


def test_omp_single_tap_picks_argmax():
    X = build_toeplitz_training(10, 30, seed=4).matrix
    h = np.zeros(30)
    h[17] = 0.8
    y = X @ h
    est = estimate_omp(X, y, 1)
    assert est.support.tolist() == [int(np.argmax(np.abs(X.T @ y)))] == [17]


def test_omp_never_reselects():
    X = build_toeplitz_training(20, 40, seed=8).matrix
    y = np.random.default_rng(1).standard_normal(20)
    est = estimate_omp(X, y, 6)
    assert len(set(est.support.tolist())) == 6


@pytest.mark.xfail(strict=True, reason=(
    "measured over 500 seeded 6x8 Toeplitz draws: OMP recovers 424/500, CoSaMP 284/500 "
    "(square 6-column merged supports are often singular); the 10-point agreement does not hold"))
def test_omp_cosamp_recovery_rates_close():
    def recovered(fn, X, y, h):
        try:
            est = fn(X, y, 2)
        except SingularSupportError:
            return False
        return np.linalg.norm(est.taps - h) <= 1e-8 * np.linalg.norm(h)

    omp = cosamp = 0
    for s in range(500):
        X = build_toeplitz_training(6, 8, seed=[s, 1, 6])
        h = generate_sparse_channel(8, 2, seed=[s, 0]).taps
        y = X.matrix @ h
        omp += recovered(estimate_omp, X, y, h)
        cosamp += recovered(estimate_cosamp, X, y, h)
    assert abs(omp - cosamp) <= 50


def test_ls_identity_and_underdetermined():
    y = np.array([1.0, -2.0, 3.0])
    np.testing.assert_allclose(estimate_ls(np.eye(3), y).taps, y, atol=1e-15)
    h = generate_sparse_channel(50, 5, seed=1)
    X = build_toeplitz_training(30, 50, seed=2)
    y = X.matrix @ h.taps
    est = estimate_ls(X, y)
    assert np.linalg.norm(y - X.matrix @ est.taps) <= 1e-8 * np.linalg.norm(y)
    assert np.linalg.norm(est.taps - h.taps) > 0.1
    assert est.support.size == 50 and est.iterations == 1


def test_oracle_noiseless_exact():
    h = generate_sparse_channel(50, 5, seed=6)
    X = build_toeplitz_training(25, 50, seed=7)
    y = synthesize_observation(X, h, NOISELESS).received
    est = estimate_oracle_ls(X, y, h.support)
    assert np.abs(est.taps - h.taps).max() <= 1e-12


def test_oracle_identity_noisy():
    y = np.random.default_rng(3).standard_normal(6)
    est = estimate_oracle_ls(np.eye(6), y, [1, 3])
    np.testing.assert_allclose(est.taps[[1, 3]], y[[1, 3]], atol=1e-15)
    assert np.all(np.delete(est.taps, [1, 3]) == 0)
