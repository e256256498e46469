"""Sparse multipath channel estimation with greedy and convex recovery."""

from .channel_model import (
    NOISELESS,
    Observation,
    SparseChannel,
    TrainingMatrix,
    build_toeplitz_training,
    generate_sparse_channel,
    synthesize_observation,
)
from .convex_baseline import DantzigConfig, LinearProgram, estimate_dantzig, solve_simplex
from .diagnostics import coherence_mu, coherence_report, ric_bruteforce, rip_sample, recovery_gate
from .estimators import CosampConfig, Estimate, estimate_cosamp, estimate_ls, estimate_omp, estimate_oracle_ls

__version__ = "0.1.0"
