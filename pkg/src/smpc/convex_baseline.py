"""Dantzig selector baseline solved by a dense two-phase simplex method.

The Dantzig selector is

    min ||h||_1   subject to   ||X^T (y - X h)||_inf <= lam

and is cast as an LP in the split variables ``h = hp - hm`` with
``hp, hm >= 0``.
"""

import time
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, SolverError
from .estimators import Estimate, _check
from .linalg_core import restricted_least_squares, top_k_indices

LE, EQ, GE = "<=", "=", ">="


@dataclass
class LinearProgram:
    """``min c @ x`` s.t. ``A[i] @ x (sense[i]) b[i]`` and ``x >= 0``."""

    objective: np.ndarray
    constraint_matrix: np.ndarray
    constraint_rhs: np.ndarray
    senses: list

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self.constraint_matrix = np.atleast_2d(np.asarray(self.constraint_matrix, dtype=float))
        self.constraint_rhs = np.asarray(self.constraint_rhs, dtype=float)
        m, n = self.constraint_matrix.shape
        if self.constraint_rhs.shape != (m,):
            raise ShapeError(f"rhs length {self.constraint_rhs.shape} does not match {m} rows")
        if self.objective.shape != (n,):
            raise ShapeError(f"objective length {self.objective.shape} does not match {n} columns")
        if isinstance(self.senses, str):
            self.senses = [self.senses] * m
        self.senses = list(self.senses)
        if len(self.senses) != m or any(s not in (LE, EQ, GE) for s in self.senses):
            raise ShapeError("need one sense in {'<=', '=', '>='} per row")


@dataclass
class DantzigConfig:
    """``lam=None`` selects ``sigma * sqrt(2 ln L)``."""

    lam: float | None = None
    simplex_max_pivots: int = 50_000
    pivot_tolerance: float = 1e-9
    debias: bool = True
    pivot_rule: str = "dantzig-bland"
    degenerate_limit: int = 50

    def __post_init__(self):
        if self.lam is not None and self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.pivot_rule not in ("bland", "dantzig-bland"):
            raise ValueError(f"unknown pivot rule {self.pivot_rule!r}")


@dataclass
class SimplexResult:
    status: str  # "optimal", "infeasible", "unbounded" or "pivot_limit"
    x: np.ndarray | None
    objective: float | None
    pivots: int


def build_dantzig_lp(X, y, lam):
    """LP for the Dantzig selector with ``2L`` variables and ``2L`` rows.

    Rows ``j`` and ``L + j`` encode ``(G h - X^T y)_j <= lam`` and
    ``-(G h - X^T y)_j <= lam`` with ``G = X^T X``.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    A, y = _check(X, y)
    G = A.T @ A
    c0 = A.T @ y
    M = np.block([[G, -G], [-G, G]])
    b = np.concatenate([lam + c0, lam - c0])
    L = A.shape[1]
    return LinearProgram(np.ones(2 * L), M, b, [LE] * (2 * L))


class _Tableau:
    """Dense simplex tableau ``[A | b]`` with a reduced-cost row.

    With ``bland=False`` the entering column is the most negative reduced
    cost until ``degenerate_limit`` consecutive degenerate pivots occur,
    after which Bland's smallest-index rule is used for the rest of the
    solve, which rules out cycling.
    """

    def __init__(self, A, b, basis, tol, bland=True, degenerate_limit=50):
        self.T = np.hstack([A, b[:, None]])
        self.basis = list(basis)
        self.tol = tol
        self.pivots = 0
        self.bland = bland
        self.degenerate_limit = degenerate_limit
        self._degenerate = 0

    def set_costs(self, c):
        cb = c[self.basis]
        self.d = c - cb @ self.T[:, :-1]
        self.z = -cb @ self.T[:, -1]

    def pivot(self, i, j):
        T = self.T
        T[i] /= T[i, j]
        col = T[:, j].copy()
        col[i] = 0.0
        T -= np.outer(col, T[i])
        dj = self.d[j]
        self.d -= dj * T[i, :-1]
        self.z -= dj * T[i, -1]
        self.basis[i] = j
        self.pivots += 1

    def run(self, allowed, max_pivots):
        """Bland's rule iterations; returns a status string."""
        tol = self.tol
        T = self.T
        while True:
            cand = np.flatnonzero((self.d < -tol) & allowed)
            if cand.size == 0:
                return "optimal"
            if self.pivots >= max_pivots:
                return "pivot_limit"
            j = cand[0] if self.bland else cand[np.argmin(self.d[cand])]
            colj = T[:, j]
            rows = np.flatnonzero(colj > tol)
            if rows.size == 0:
                return "unbounded"
            ratios = T[rows, -1] / colj[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, abs(best))]
            i = min(ties, key=lambda r: self.basis[r])
            if best <= tol:
                self._degenerate += 1
                if self._degenerate >= self.degenerate_limit:
                    self.bland = True
            else:
                self._degenerate = 0
            self.pivot(i, j)


def solve_simplex(lp, cfg=None):
    """Two-phase dense simplex with Bland's anti-cycling rule.

    ``cfg.pivot_rule`` is ``"bland"`` (smallest index throughout) or
    ``"dantzig-bland"`` (most negative reduced cost, switching to Bland's
    rule after a run of degenerate pivots).

    Returns a :class:`SimplexResult`; non-optimal outcomes are reported in
    ``status`` rather than raised.  The optimal vertex is re-solved from the
    original data on the final basis to remove accumulated pivoting error.
    """
    cfg = cfg or DantzigConfig()
    tol = cfg.pivot_tolerance
    A0 = lp.constraint_matrix
    b0 = lp.constraint_rhs
    m, n = A0.shape

    A = A0.copy()
    b = b0.copy()
    senses = list(lp.senses)
    for i in range(m):
        if b[i] < 0:
            A[i] *= -1
            b[i] *= -1
            senses[i] = {LE: GE, GE: LE, EQ: EQ}[senses[i]]

    n_slack = sum(s != EQ for s in senses)
    n_art = sum(s != LE for s in senses)
    width = n + n_slack + n_art
    full = np.zeros((m, width))
    full[:, :n] = A
    basis = []
    k_s, k_a = n, n + n_slack
    for i, s in enumerate(senses):
        if s != EQ:
            full[i, k_s] = 1.0 if s == LE else -1.0
            if s == LE:
                basis.append(k_s)
            k_s += 1
        if s != LE:
            full[i, k_a] = 1.0
            basis.append(k_a)
            k_a += 1
    std = full.copy()  # standard-form data for the final re-solve

    tab = _Tableau(full, b, basis, tol, cfg.pivot_rule == "bland", cfg.degenerate_limit)
    is_art = np.zeros(width, dtype=bool)
    is_art[n + n_slack:] = True
    if n_art:
        c1 = is_art.astype(float)
        tab.set_costs(c1)
        status = tab.run(np.ones(width, dtype=bool), cfg.simplex_max_pivots)
        if status == "pivot_limit":
            return SimplexResult(status, None, None, tab.pivots)
        if -tab.z > tol * max(1.0, np.abs(b).max()):
            return SimplexResult("infeasible", None, None, tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if is_art[tab.basis[i]]:
                nz = np.flatnonzero((np.abs(tab.T[i, :-1]) > tol) & ~is_art)
                if nz.size == 0:
                    continue
                tab.pivot(i, nz[0])
            keep.append(i)
        tab.T = tab.T[keep]
        tab.basis = [tab.basis[i] for i in keep]
        std, b = std[keep], b[keep]

    c2 = np.zeros(width)
    c2[:n] = lp.objective
    tab.set_costs(c2)
    status = tab.run(~is_art, cfg.simplex_max_pivots)
    if status != "optimal":
        return SimplexResult(status, None, None, tab.pivots)

    x = np.zeros(width)
    B = std[:, tab.basis]
    try:
        xb = np.linalg.solve(B, b)
    except np.linalg.LinAlgError:
        xb = tab.T[:, -1]
    x[tab.basis] = np.maximum(xb, 0.0)
    x = x[:n]
    return SimplexResult("optimal", x, float(lp.objective @ x), tab.pivots)


def dantzig_lambda(sigma, L):
    return float(sigma) * np.sqrt(2.0 * np.log(L))


def estimate_dantzig(X, y, sigma, S, cfg=None):
    """Dantzig selector estimate, optionally debiased to ``S`` taps.

    With ``cfg.debias`` the LP solution is pruned to its ``S`` largest
    magnitudes and those taps are refit by least squares.

    Raises
    ------
    SolverError
        If the simplex does not reach an optimal vertex.
    """
    cfg = cfg or DantzigConfig()
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    t0 = time.perf_counter()
    A, y = _check(X, y)
    L = A.shape[1]
    lam = dantzig_lambda(sigma, L) if cfg.lam is None else cfg.lam
    res = solve_simplex(build_dantzig_lp(A, y, lam), cfg)
    if res.status != "optimal":
        raise SolverError(res.status, f"Dantzig LP with lambda={lam:.6g}, L={L}")
    h = res.x[:L] - res.x[L:]
    if cfg.debias:
        support = top_k_indices(h, S)
        h = restricted_least_squares(A, support, y)
    else:
        support = np.flatnonzero(h)
    r = float(np.linalg.norm(y - A @ h))
    return Estimate(h, support, 1, [r], time.perf_counter() - t0)
