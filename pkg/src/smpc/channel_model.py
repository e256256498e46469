"""Sparse multipath channels, Toeplitz training matrices and noisy observations.

All randomness comes from numpy's PCG64 bit generator, seeded through
``numpy.random.default_rng``.  A seed is either a non-negative integer or a
sequence of them (hashed by ``SeedSequence``), so callers can derive
independent streams such as ``[trial_seed, stream_id, N]``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSignalError, ShapeError, SparsityError
from .linalg_core import as_matrix

NOISELESS = None
"""Sentinel ``snr_db`` value meaning "add no noise"."""


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class SparseChannel:
    taps: np.ndarray
    support: np.ndarray

    @property
    def L(self):
        return self.taps.shape[0]

    @property
    def S(self):
        return self.support.shape[0]

    @classmethod
    def from_taps(cls, taps):
        taps = np.asarray(taps, dtype=float)
        return cls(taps, np.flatnonzero(taps))


@dataclass
class TrainingMatrix:
    """``N x L`` Toeplitz training matrix and the symbols it was built from.

    Entry ``(i, j)`` equals ``generator_sequence[i - j + L - 1]``.
    """

    matrix: np.ndarray
    generator_sequence: np.ndarray = field(repr=False)

    @property
    def N(self):
        return self.matrix.shape[0]

    @property
    def L(self):
        return self.matrix.shape[1]


@dataclass
class Observation:
    received: np.ndarray
    noise_variance: float
    snr_db: float | None
    noise_seed: object = None


def generate_sparse_channel(L, S, amp_low=0.2, amp_high=1.0, seed=None):
    """Draw an ``S``-sparse real channel of length ``L``.

    Support positions are uniform without replacement, magnitudes uniform on
    ``[amp_low, amp_high]`` and signs equiprobable.

    Raises
    ------
    SparsityError
        If ``S`` is not in ``[1, L/2]``.
    """
    L, S = int(L), int(S)
    if S < 1 or 2 * S > L:
        raise SparsityError(f"need 1 <= S <= L/2, got S={S}, L={L}")
    if not 0 < amp_low <= amp_high:
        raise ValueError(f"need 0 < amp_low <= amp_high, got {amp_low}, {amp_high}")
    rng = make_rng(seed)
    support = np.sort(rng.choice(L, size=S, replace=False))
    mags = rng.uniform(amp_low, amp_high, size=S)
    signs = np.where(rng.random(S) < 0.5, -1.0, 1.0)
    taps = np.zeros(L)
    taps[support] = signs * mags
    return SparseChannel(taps, support)


def toeplitz_from_sequence(seq, N, L):
    seq = np.asarray(seq, dtype=float)
    if seq.shape != (N + L - 1,):
        raise ShapeError(f"need a sequence of length {N + L - 1}, got {seq.shape}")
    i = np.arange(N)[:, None]
    j = np.arange(L)[None, :]
    return seq[i - j + L - 1]


def build_toeplitz_training(N, L, seed=None):
    """Rademacher Toeplitz training matrix with entries ``+-1/sqrt(N)``.

    Every column has unit Euclidean norm.
    """
    N, L = int(N), int(L)
    if N < 1 or N >= L:
        raise ShapeError(f"training must be underdetermined (1 <= N < L), got N={N}, L={L}")
    rng = make_rng(seed)
    seq = np.where(rng.random(N + L - 1) < 0.5, -1.0, 1.0) / np.sqrt(N)
    return TrainingMatrix(toeplitz_from_sequence(seq, N, L), seq)


def noise_variance_for(clean, snr_db):
    """Per-sample noise variance ``||clean||^2 / (N 10^(snr/10))``."""
    if snr_db is NOISELESS:
        return 0.0
    energy = float(clean @ clean)
    if energy == 0.0:
        raise DegenerateSignalError("clean signal is zero; SNR is undefined")
    return energy / (clean.shape[0] * 10.0 ** (snr_db / 10.0))


def synthesize_observation(X, h, snr_db=10.0, seed=None):
    """Received signal ``y = X h + z`` with white Gaussian ``z``.

    ``snr_db=None`` (:data:`NOISELESS`) gives ``z = 0``.
    """
    A = as_matrix(X)
    taps = np.asarray(getattr(h, "taps", h), dtype=float)
    if taps.shape != (A.shape[1],):
        raise ShapeError(f"channel of length {taps.shape} does not match {A.shape[1]} columns")
    clean = A @ taps
    var = noise_variance_for(clean, snr_db)
    if var == 0.0:
        return Observation(clean, 0.0, snr_db, seed)
    rng = make_rng(seed)
    noise = rng.normal(0.0, np.sqrt(var), size=clean.shape[0])
    return Observation(clean + noise, var, snr_db, seed)
