"""
Coherence and restricted isometry constants
===========================================

delta_S measures how far X is from an isometry on S-sparse vectors. It is
computed here by checking every S-column Gram matrix, which is only
feasible for small L. A sampled version gives a lower bound otherwise.
"""

import math

import numpy as np

from smpc import build_toeplitz_training, coherence_report, ric_bruteforce, rip_sample, recovery_gate
from smpc.errors import CombinatorialLimitError

# %%
# For +-1/sqrt(N) entries the scaled entrywise coherence is sqrt(L/N).
X = build_toeplitz_training(25, 50, seed=0)
rep = coherence_report(X, S=5)
print("mu_X =", rep.mu, " sqrt(2) =", math.sqrt(2))
print("mutual coherence (column inner products):", round(rep.mutual_coherence, 4))
print("length bound N >= %.3g (C1 = 1): %s" % (rep.bound_rhs, rep.satisfied))

# %%
# Exact RICs on a small Toeplitz matrix grow with the order.
small = build_toeplitz_training(6, 10, seed=2)
for S in range(1, 5):
    r = ric_bruteforce(small, S)
    print(f"delta_{S} = {r.delta:.4f} over {r.supports_checked} supports, worst {r.worst_support}")

# %%
# Sampling never overshoots the exact value.
for trials in (5, 20, 100):
    print(trials, "samples:", round(rip_sample(small, 3, trials, seed=1).delta, 4),
          "exact:", round(ric_bruteforce(small, 3).delta, 4))

# %%
# The gate delta_2S <= sqrt(2) - 1 is strict. Short Toeplitz matrices
# rarely meet it.
hits = sum(recovery_gate(build_toeplitz_training(6, 8, seed=s), 2)[1] for s in range(100))
print("gate satisfied on", hits, "of 100 draws of 6 x 8 Toeplitz, S = 2")
print("identity:", recovery_gate(np.eye(8), 2)[1])

# %%
# The full 50-column problem is out of reach for exhaustive search.
try:
    ric_bruteforce(X, 5)
except CombinatorialLimitError as exc:
    print("guard:", exc)
