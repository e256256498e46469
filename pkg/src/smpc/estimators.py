"""Channel estimators: CoSaMP, OMP, minimum-norm LS and support-oracle LS.

Every estimator takes the training matrix (a :class:`TrainingMatrix` or a
plain 2-D array) and the received vector, and returns an :class:`Estimate`.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import OverdeterminedSupportError, ShapeError
from .linalg_core import (
    _restricted_lstsq,
    _top_k,
    as_matrix,
    as_support,
    as_vector,
    min_norm_least_squares,
    restricted_least_squares,
)


@dataclass
class Estimate:
    taps: np.ndarray
    support: np.ndarray
    iterations: int
    residual_norms: list = field(default_factory=list)
    elapsed_seconds: float = 0.0


@dataclass
class CosampConfig:
    """Stopping parameters for :func:`estimate_cosamp`.

    ``max_iterations`` defaults to ``4 * sparsity``.  ``stall_limit`` is the
    number of consecutive non-decreasing residual norms that stops the loop.
    """

    sparsity: int
    max_iterations: int | None = None
    halt_tolerance: float = 1e-4
    stall_limit: int = 3

    def __post_init__(self):
        if self.max_iterations is None:
            self.max_iterations = 4 * self.sparsity
        if self.sparsity < 1:
            raise ValueError("sparsity must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.halt_tolerance > 0:
            raise ValueError("halt_tolerance must be > 0")


def _check(X, y):
    A = as_matrix(X)
    y = as_vector(y)
    if y.shape[0] != A.shape[0]:
        raise ShapeError(f"observation of length {y.shape[0]} does not match {A.shape[0]} rows")
    return A, y


def estimate_cosamp(X, y, cfg):
    """Compressive sampling matching pursuit.

    Each iteration correlates the residual with the columns, keeps the
    ``2S`` strongest correlations, merges them with the current support,
    solves least squares on the merged set, prunes to the ``S`` largest taps
    and refreshes the residual.

    The loop starts from ``h = 0`` and stops after ``cfg.max_iterations``
    iterations, when successive estimates differ by at most
    ``cfg.halt_tolerance`` in Euclidean norm, when the residual vanishes
    (``||r|| <= 1e-12 ||y||``), or when the residual norm has failed to
    decrease ``cfg.stall_limit`` times in a row.

    Parameters
    ----------
    X : TrainingMatrix or ndarray
        ``N x L`` training matrix.
    y : ndarray
        Received vector of length ``N``.
    cfg : CosampConfig or int
        Stopping parameters; an integer is taken as the sparsity.

    Returns
    -------
    Estimate
        ``S``-sparse estimate; ``residual_norms[i]`` is ``||y - X h_i||``
        after iteration ``i + 1``.

    Raises
    ------
    OverdeterminedSupportError
        If a merged support has more than ``N`` indices.
    SingularSupportError
        If the columns of a merged support are numerically dependent.
    """
    if not isinstance(cfg, CosampConfig):
        cfg = CosampConfig(int(cfg))
    t0 = time.perf_counter()
    A, y = _check(X, y)
    N, L = A.shape
    S = cfg.sparsity
    if 2 * S > L:
        raise ValueError(f"sparsity {S} too large for {L} columns")

    y_norm = np.linalg.norm(y)
    h = np.zeros(L)
    support = np.zeros(0, dtype=np.intp)
    r = y
    norms = []
    stalls = 0
    while len(norms) < cfg.max_iterations and np.linalg.norm(r) > 1e-12 * y_norm:
        proxy = A.T @ r
        omega = np.union1d(_top_k(proxy, 2 * S), support)
        if omega.size > N:
            raise OverdeterminedSupportError(omega.size, N)
        b = _restricted_lstsq(A, omega, y)
        support = _top_k(b, S)
        h_new = np.zeros(L)
        h_new[support] = b[support]
        r = y - A @ h_new
        r_norm = float(np.linalg.norm(r))
        stalls = stalls + 1 if norms and r_norm >= norms[-1] else 0
        norms.append(r_norm)
        change = np.linalg.norm(h_new - h)
        h = h_new
        if change <= cfg.halt_tolerance or stalls >= cfg.stall_limit:
            break
    return Estimate(h, support, len(norms), norms, time.perf_counter() - t0)


def estimate_omp(X, y, S):
    """Orthogonal matching pursuit with exactly ``S`` iterations.

    Each iteration adds the not-yet-selected column most correlated with the
    residual (lowest index on ties) and re-solves least squares on the
    accumulated support.
    """
    t0 = time.perf_counter()
    A, y = _check(X, y)
    N, L = A.shape
    S = int(S)
    if S > N or S > L:
        raise OverdeterminedSupportError(S, N)
    chosen = []
    r = y
    h = np.zeros(L)
    norms = []
    for _ in range(S):
        score = np.abs(A.T @ r)
        score[chosen] = -1.0
        chosen.append(int(np.argmax(score)))
        h = _restricted_lstsq(A, np.sort(np.array(chosen, dtype=np.intp)), y)
        r = y - A @ h
        norms.append(float(np.linalg.norm(r)))
    return Estimate(h, np.sort(np.array(chosen, dtype=np.intp)), S, norms, time.perf_counter() - t0)


def estimate_ls(X, y):
    """Minimum-norm least squares over all ``L`` taps."""
    t0 = time.perf_counter()
    A, y = _check(X, y)
    h = min_norm_least_squares(A, y)
    r = float(np.linalg.norm(y - A @ h))
    return Estimate(h, np.arange(A.shape[1]), 1, [r], time.perf_counter() - t0)


def estimate_oracle_ls(X, y, true_support):
    """Least squares restricted to the known dominant-tap positions."""
    t0 = time.perf_counter()
    A, y = _check(X, y)
    support = as_support(true_support, A.shape[1])
    h = restricted_least_squares(A, support, y)
    r = float(np.linalg.norm(y - A @ h))
    return Estimate(h, support, 1, [r], time.perf_counter() - t0)
