"""
Monte-Carlo comparison over training length
===========================================

Paired trials: within each (N, trial) cell every estimator sees the same X
and y. A small run is shown here. `smpc bench` runs the full grid and
writes CSV and gnuplot files.
"""

import numpy as np

from smpc import bench_harness as bh

cfg = bh.ExperimentConfig(trials=40, base_seed=0)
records = bh.run_experiment(cfg)
print(bh.format_summary(records, cfg))

# %%
# Paired differences give tighter error bars than comparing two MSEs.
for N in (25, 35, 45):
    d, se = bh.paired_difference(records, "omp", "cosamp", N)
    print(f"N={N}: mse(omp) - mse(cosamp) = {d:+.4f} +- {se:.4f}")

# %%
# Empirical CDF of the squared error at N = 35.
grid = bh.cdf_grid(records, 35, points=6)
for e in ("cosamp", "omp", "oracle"):
    vals = [r.sq_err_all for r in records if r.estimator == e and r.N == 35 and r.ok]
    print(f"{e:<7}", " ".join(f"{F:.2f}" for _, F in bh.empirical_cdf(vals, grid)))
print("grid   ", " ".join(f"{x:.2g}" for x in grid))

# %%
# Failures are kept, not dropped silently.
failed = [r for r in records if not r.ok]
print(len(failed), "failed runs")
if failed:
    print("first:", failed[0].estimator, "N =", failed[0].N, failed[0].status)
print("mean ms:", {k: round(v * 1e3, 3) for k, v in bh.timing_summary(records).items()})
