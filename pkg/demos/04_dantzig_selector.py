"""
Dantzig selector as a linear program
====================================

min ||h||_1 subject to ||X^T (y - X h)||_inf <= lambda. Splitting
h = u - v with u, v >= 0 turns it into an LP with 2L variables, solved
here by a dense two-phase simplex.
"""

import math

import numpy as np

from smpc import DantzigConfig, LinearProgram, build_toeplitz_training, estimate_dantzig, generate_sparse_channel
from smpc import solve_simplex, synthesize_observation
from smpc.convex_baseline import build_dantzig_lp, dantzig_lambda

# %%
# The simplex on a textbook problem: max 3a + 5b with three resource limits.
lp = LinearProgram([-3.0, -5.0], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], "<=")
res = solve_simplex(lp)
print(res.status, res.x, -res.objective, "pivots:", res.pivots)

# %%
# A channel instance. lambda follows sigma * sqrt(2 ln L).
L, S, N = 50, 5, 25
h = generate_sparse_channel(L, S, seed=[11, 0])
X = build_toeplitz_training(N, L, seed=[11, 1, N])
obs = synthesize_observation(X, h, 10.0, seed=[11, 2, N])
sigma = math.sqrt(obs.noise_variance)
lam = dantzig_lambda(sigma, L)
print("lambda = %.4f" % lam)

raw = estimate_dantzig(X, obs.received, sigma, S, DantzigConfig(debias=False))
deb = estimate_dantzig(X, obs.received, sigma, S)
slack = np.abs(X.matrix.T @ (obs.received - X.matrix @ raw.taps)).max()
print("constraint: %.6f <= %.6f" % (slack, lam))
print("raw LP      sq_err %.4f, %d nonzeros" % (np.sum((raw.taps - h.taps) ** 2), np.count_nonzero(raw.taps)))
print("debiased    sq_err %.4f, support %s" % (np.sum((deb.taps - h.taps) ** 2), deb.support))
print("true support          ", h.support)

# %%
# The LP itself, for inspection.
lp = build_dantzig_lp(X, obs.received, lam)
print("LP:", lp.constraint_matrix.shape, "rows x variables")
