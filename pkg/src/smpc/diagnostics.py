"""Restricted-isometry and coherence diagnostics for training matrices."""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .channel_model import make_rng
from .errors import CombinatorialLimitError, DomainError
from .linalg_core import as_matrix

MAX_SUPPORTS = 1_000_000
RIP_GATE = math.sqrt(2.0) - 1.0
_BATCH = 4096


@dataclass
class RipReport:
    """Restricted isometry constant of a given order.

    ``exact`` is False when ``delta`` is only a lower bound from sampling.
    """

    order: int
    delta: float
    worst_support: np.ndarray
    exact: bool = True
    supports_checked: int = 0

    @property
    def violated(self):
        return self.delta >= 1.0

    @property
    def label(self):
        return "exact" if self.exact else "sampled lower bound"


@dataclass
class CoherenceReport:
    mu: float
    mutual_coherence: float
    bound_rhs: float
    c1: float
    satisfied: bool


def coherence_mu(X):
    """``sqrt(L) * max |X_ij|``, the entrywise coherence used in the length bound."""
    A = as_matrix(X)
    if A.size == 0:
        return 0.0
    return math.sqrt(A.shape[1]) * float(np.abs(A).max())


def mutual_coherence(X):
    """Largest normalised inner product between two distinct columns."""
    A = as_matrix(X)
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    G = np.abs((A / norms).T @ (A / norms))
    np.fill_diagonal(G, 0.0)
    return float(G.max()) if G.size else 0.0


def training_length_bound(L, S, mu, c1=1.0, log_base=math.e):
    """Right-hand side ``c1 * S * (log L)**4 * mu**2`` of the length bound."""
    if L < 2:
        raise DomainError(f"need L >= 2 for log L > 0, got L={L}")
    if c1 <= 0:
        raise DomainError("c1 must be positive")
    return c1 * S * (math.log(L, log_base)) ** 4 * mu**2


def coherence_report(X, S, c1=1.0, log_base=math.e):
    A = as_matrix(X)
    N, L = A.shape
    mu = coherence_mu(A)
    rhs = training_length_bound(L, S, mu, c1, log_base)
    return CoherenceReport(mu, mutual_coherence(A), rhs, c1, N >= rhs)


def _gram_deviation(A, supports):
    """Max of ``|eig - 1|`` of each Gram submatrix, for a batch of supports."""
    sub = A[:, supports]  # (N, batch, S)
    gram = np.einsum("nbi,nbj->bij", sub, sub)
    eig = np.linalg.eigvalsh(gram)
    return np.maximum(eig[:, -1] - 1.0, 1.0 - eig[:, 0])


def _scan(A, support_iter, S):
    best, worst, count = 0.0, np.arange(S), 0
    while True:
        batch = np.array(list(_take(support_iter, _BATCH)), dtype=np.intp).reshape(-1, S)
        if batch.shape[0] == 0:
            return best, worst, count
        dev = _gram_deviation(A, batch)
        k = int(np.argmax(dev))
        count += batch.shape[0]
        if dev[k] > best:
            best, worst = float(dev[k]), batch[k].copy()


def _take(it, n):
    for _, item in zip(range(n), it):
        yield item


def ric_bruteforce(X, S, max_supports=MAX_SUPPORTS):
    """Exact restricted isometry constant by enumerating every ``S``-subset.

    Eigenvalues of each ``S x S`` Gram block come from LAPACK's symmetric
    solver (``numpy.linalg.eigvalsh``).

    Raises
    ------
    CombinatorialLimitError
        If ``C(L, S)`` exceeds ``max_supports``; use :func:`rip_sample`.
    """
    A = as_matrix(X)
    L = A.shape[1]
    S = int(S)
    if not 1 <= S <= L:
        raise DomainError(f"order S={S} outside [1, {L}]")
    total = math.comb(L, S)
    if total > max_supports:
        raise CombinatorialLimitError(
            f"C({L}, {S}) = {total} supports exceeds {max_supports}; "
            "use rip_sample for a sampled lower bound"
        )
    delta, worst, count = _scan(A, combinations(range(L), S), S)
    return RipReport(S, delta, worst, True, count)


def rip_sample(X, S, trials, seed=None):
    """Lower bound on the restricted isometry constant from random supports.

    When ``trials >= C(L, S)`` every support is visited and the result is
    exact.
    """
    A = as_matrix(X)
    L = A.shape[1]
    S = int(S)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if not 1 <= S <= L:
        raise DomainError(f"order S={S} outside [1, {L}]")
    if trials >= math.comb(L, S):
        delta, worst, count = _scan(A, combinations(range(L), S), S)
        return RipReport(S, delta, worst, True, count)
    rng = make_rng(seed)
    supports = (np.sort(rng.choice(L, size=S, replace=False)) for _ in range(trials))
    delta, worst, count = _scan(A, supports, S)
    return RipReport(S, delta, worst, False, count)


def recovery_gate(X, S, exact=True, trials=10_000, seed=None):
    """Report for order ``2S`` and whether ``delta_2S <= sqrt(2) - 1``."""
    rep = ric_bruteforce(X, 2 * S) if exact else rip_sample(X, 2 * S, trials, seed)
    return rep, rep.delta <= RIP_GATE
