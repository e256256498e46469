"""
Sparse channels and Toeplitz training
=====================================

A length-L channel with only S nonzero taps is probed by a Rademacher
training sequence. The received block is y = X h + noise, where X is the
N x L Toeplitz matrix built from the sequence.
"""

import numpy as np

from smpc import NOISELESS, build_toeplitz_training, generate_sparse_channel, synthesize_observation

# %%
# Draw a channel. Tap positions are uniform without replacement, magnitudes
# uniform in [0.2, 1], signs random.
h = generate_sparse_channel(L=50, S=5, seed=7)
print("support:", h.support)
print("taps   :", np.round(h.taps[h.support], 3))

# %%
# The training matrix is constant along diagonals, and every entry is +-1/sqrt(N),
# so each column has unit norm.
X = build_toeplitz_training(N=25, L=50, seed=7)
A = X.matrix
print("shape:", A.shape)
print("constant diagonals:", all(np.all(np.diag(A, k) == np.diag(A, k)[0]) for k in range(-24, 50)))
print("column norms:", np.unique(np.round(np.linalg.norm(A, axis=0), 12)))

# %%
# Noise is scaled from the realized signal power, so 10 dB means
# sigma^2 = ||X h||^2 / (N * 10).
obs = synthesize_observation(X, h, snr_db=10.0, seed=7)
clean = A @ h.taps
print("sigma^2 =", obs.noise_variance, " check:", clean @ clean / (25 * 10))
print("realized SNR (dB): %.2f" % (10 * np.log10(clean @ clean / np.sum((obs.received - clean) ** 2))))

# %%
# NOISELESS skips the noise draw entirely.
exact = synthesize_observation(X, h, NOISELESS)
print("noiseless residual:", np.abs(exact.received - clean).max())
