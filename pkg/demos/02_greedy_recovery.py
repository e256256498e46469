"""
CoSaMP and OMP on one instance
==============================

Both pursuits use the proxy X^T r to find candidate taps. OMP adds one tap
per pass. CoSaMP takes 2S candidates at once, merges them with the current
support, solves least squares there and prunes back to S.
"""

import numpy as np

from smpc import (
    CosampConfig,
    build_toeplitz_training,
    estimate_cosamp,
    estimate_ls,
    estimate_omp,
    estimate_oracle_ls,
    generate_sparse_channel,
    synthesize_observation,
)

L, S, N = 50, 5, 35
h = generate_sparse_channel(L, S, seed=[3, 0])
X = build_toeplitz_training(N, L, seed=[3, 1, N])

# %%
# Noiseless first: CoSaMP lands on the true support and the error is at
# rounding level.
y = X.matrix @ h.taps
est = estimate_cosamp(X, y, CosampConfig(S))
print("true support  :", h.support)
print("cosamp support:", est.support, "after", est.iterations, "iterations")
print("error:", np.linalg.norm(est.taps - h.taps))
print("residual history:", ["%.2e" % r for r in est.residual_norms])

# %%
# With noise at 10 dB, compare against OMP, the minimum-norm LS solution and
# the oracle that is told the support.
obs = synthesize_observation(X, h, 10.0, seed=[3, 2, N])
results = {
    "cosamp": estimate_cosamp(X, obs.received, S),
    "omp": estimate_omp(X, obs.received, S),
    "ls": estimate_ls(X, obs.received),
    "oracle": estimate_oracle_ls(X, obs.received, h.support),
}
for name, r in results.items():
    err = np.sum((r.taps - h.taps) ** 2)
    dom = np.sum((r.taps[h.support] - h.taps[h.support]) ** 2)
    print(f"{name:<7} sq_err {err:.4f}  dominant {dom:.4f}  {r.elapsed_seconds * 1e3:.2f} ms")

# %%
# Minimum-norm LS spreads energy over all 50 taps because N < L.
print("LS nonzeros:", np.count_nonzero(np.abs(results["ls"].taps) > 1e-12))
