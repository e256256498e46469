"""Monte-Carlo comparison of the channel estimators.

Each ``(N, trial)`` cell draws one channel, one training matrix and one noise
realisation and runs every configured estimator on the same ``(X, y)`` pair.
Seeds are derived from ``seed = base_seed + trial``:

* channel: ``[seed, 0]`` (shared by every ``N`` of the trial)
* training matrix: ``[seed, 1, N]``
* noise: ``[seed, 2, N]``

so results do not depend on execution order or on the number of workers.
"""

import csv
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .channel_model import (
    build_toeplitz_training,
    generate_sparse_channel,
    synthesize_observation,
)
from .convex_baseline import DantzigConfig, estimate_dantzig
from .errors import DomainError, SmpcError
from .estimators import (
    CosampConfig,
    estimate_cosamp,
    estimate_ls,
    estimate_omp,
    estimate_oracle_ls,
)

ESTIMATOR_NAMES = ("cosamp", "omp", "ls", "oracle", "ds")
CSV_HEADER = [
    "estimator", "N", "trial", "seed", "sq_err_all", "sq_err_dom",
    "elapsed_seconds", "iterations", "support_exact", "status",
]
TIMING_NOTE = "elapsed times are wall-clock seconds on this machine and are environment dependent"


@dataclass
class ExperimentConfig:
    L: int = 50
    S: int = 5
    amp_low: float = 0.2
    amp_high: float = 1.0
    snr_db: float | None = 10.0
    n_values: tuple = (15, 20, 25, 30, 35, 40, 45)
    trials: int = 1000
    base_seed: int = 0
    estimators: tuple = ESTIMATOR_NAMES
    ds_debias: bool = True
    ds_lambda: float | None = None

    def __post_init__(self):
        self.n_values = tuple(int(n) for n in self.n_values)
        self.estimators = tuple(self.estimators)
        self.validate()

    def validate(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_values:
            raise ValueError("n_values is empty")
        for n in self.n_values:
            if not self.S <= n < self.L:
                raise ValueError(f"every N must satisfy S <= N < L; got N={n}, S={self.S}, L={self.L}")
        if 2 * self.S > self.L or self.S < 1:
            raise ValueError(f"need 1 <= S <= L/2, got S={self.S}, L={self.L}")
        unknown = set(self.estimators) - set(ESTIMATOR_NAMES)
        if unknown:
            raise ValueError(f"unknown estimators: {sorted(unknown)}")
        if len(set(self.estimators)) != len(self.estimators):
            raise ValueError("estimators listed twice")


@dataclass
class TrialRecord:
    estimator: str
    N: int
    trial: int
    seed: int
    sq_err_all: float
    sq_err_dom: float
    elapsed_seconds: float
    iterations: int
    support_exact: bool
    status: str = "ok"
    h_norm_sq: float = field(default=math.nan, compare=False)
    data_hash: str = field(default="", compare=False)

    @property
    def ok(self):
        return self.status == "ok"


@dataclass
class MseRow:
    estimator: str
    N: int
    trials: int
    failed: int
    mse_all: float
    se_all: float
    mse_dom: float
    se_dom: float
    nmse_all: float
    mean_elapsed: float


def _run_one(name, X, y, channel, obs, cfg):
    if name == "cosamp":
        return estimate_cosamp(X, y, CosampConfig(cfg.S))
    if name == "omp":
        return estimate_omp(X, y, cfg.S)
    if name == "ls":
        return estimate_ls(X, y)
    if name == "oracle":
        return estimate_oracle_ls(X, y, channel.support)
    if name == "ds":
        dcfg = DantzigConfig(lam=cfg.ds_lambda, debias=cfg.ds_debias)
        return estimate_dantzig(X, y, math.sqrt(obs.noise_variance), cfg.S, dcfg)
    raise ValueError(f"unknown estimator {name!r}")


def data_digest(X, y):
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(X.matrix).tobytes())
    h.update(np.ascontiguousarray(y).tobytes())
    return h.hexdigest()[:16]


def run_cell(cfg, N, trial):
    """All estimator records for one ``(N, trial)`` cell."""
    seed = cfg.base_seed + trial
    channel = generate_sparse_channel(cfg.L, cfg.S, cfg.amp_low, cfg.amp_high, [seed, 0])
    X = build_toeplitz_training(N, cfg.L, [seed, 1, N])
    obs = synthesize_observation(X, channel, cfg.snr_db, [seed, 2, N])
    y = obs.received
    digest = data_digest(X, y)
    h = channel.taps
    h_sq = float(h @ h)
    out = []
    for name in cfg.estimators:
        try:
            est = _run_one(name, X, y, channel, obs, cfg)
        except SmpcError as exc:
            out.append(TrialRecord(name, N, trial, seed, math.nan, math.nan, math.nan, 0, False,
                                   f"error:{type(exc).__name__}", h_sq, digest))
            continue
        err = est.taps - h
        out.append(TrialRecord(
            name, N, trial, seed,
            float(err @ err),
            float(err[channel.support] @ err[channel.support]),
            est.elapsed_seconds,
            est.iterations,
            bool(np.array_equal(np.flatnonzero(est.taps), channel.support)),
            "ok", h_sq, digest,
        ))
    return out


def _run_cell_args(args):
    return run_cell(*args)


def iter_experiment(cfg, jobs=1):
    """Yield the record list of each cell as it completes (order unspecified)."""
    cfg.validate()
    units = [(cfg, N, m) for N in cfg.n_values for m in range(cfg.trials)]
    if jobs <= 1:
        for u in units:
            yield run_cell(*u)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_run_cell_args, units, chunksize=max(1, len(units) // (8 * jobs)))


def sort_records(records, estimators=ESTIMATOR_NAMES):
    rank = {name: i for i, name in enumerate(estimators)}
    return sorted(records, key=lambda r: (rank.get(r.estimator, len(rank)), r.estimator, r.N, r.trial))


def run_experiment(cfg, jobs=1):
    """Run every cell and return records sorted by ``(estimator, N, trial)``."""
    records = []
    for cell in iter_experiment(cfg, jobs):
        records.extend(cell)
    return sort_records(records, cfg.estimators)


# -- aggregation ---------------------------------------------------------------

def _ok_values(records, attr):
    return np.array([getattr(r, attr) for r in records if r.ok], dtype=float)


def mse(records):
    """Mean of ``sq_err_all`` over the successful records of one cell."""
    vals = _ok_values(records, "sq_err_all")
    if vals.size == 0:
        raise DomainError("no successful trials in this cell")
    return float(vals.mean())


def _se(vals):
    return float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else math.nan


def group_records(records):
    cells = {}
    for r in records:
        cells.setdefault((r.estimator, r.N), []).append(r)
    return cells


def mse_report(records):
    rows = []
    for (name, N), cell in group_records(records).items():
        ok = [r for r in cell if r.ok]
        all_ = _ok_values(cell, "sq_err_all")
        dom = _ok_values(cell, "sq_err_dom")
        norm = np.array([r.sq_err_all / r.h_norm_sq for r in ok], dtype=float)
        t = _ok_values(cell, "elapsed_seconds")
        nan = math.nan
        rows.append(MseRow(
            name, N, len(cell), len(cell) - len(ok),
            float(all_.mean()) if ok else nan, _se(all_),
            float(dom.mean()) if ok else nan, _se(dom),
            float(norm.mean()) if ok else nan,
            float(t.mean()) if ok else nan,
        ))
    return rows


def paired_difference(records, first, second, N, attr="sq_err_all"):
    """Mean and standard error of ``first - second`` over trials where both succeeded."""
    a = {r.trial: getattr(r, attr) for r in records if r.estimator == first and r.N == N and r.ok}
    b = {r.trial: getattr(r, attr) for r in records if r.estimator == second and r.N == N and r.ok}
    common = sorted(set(a) & set(b))
    if not common:
        raise DomainError(f"no common successful trials for {first} and {second} at N={N}")
    d = np.array([a[t] - b[t] for t in common])
    return float(d.mean()), _se(d)


def empirical_cdf(values, grid):
    """Pairs ``(x, F(x))`` with ``F(x)`` the fraction of values ``<= x``."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise DomainError("empirical CDF of an empty sample")
    g = np.asarray(grid, dtype=float)
    if np.any(np.diff(g) < 0):
        raise ValueError("grid must be sorted ascending")
    F = np.searchsorted(v, g, side="right") / v.size
    return list(zip(g.tolist(), F.tolist()))


def timing_summary(records):
    """Mean ``elapsed_seconds`` per estimator over successful records."""
    times = {}
    for r in records:
        if r.ok:
            times.setdefault(r.estimator, []).append(r.elapsed_seconds)
    return {k: float(np.mean(v)) for k, v in times.items()}


# -- persistence ---------------------------------------------------------------

def _fmt(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(records, path):
    """One row per record with 17 significant digits for floats."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in records:
                w.writerow([_fmt(getattr(r, k)) for k in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write trial CSV {path}: {exc}") from exc


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {rows[:1]}")
    out = []
    for line, row in enumerate(rows[1:], start=2):
        try:
            out.append(TrialRecord(
                row[0], int(row[1]), int(row[2]), int(row[3]),
                float(row[4]), float(row[5]), float(row[6]), int(row[7]),
                row[8] == "1", row[9],
            ))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"{path}:{line}: {exc}") from exc
    return out


def write_seed_log(records, path):
    """``N trial seed data_hash`` for every cell, proving paired inputs."""
    cells = {}
    for r in records:
        key = (r.N, r.trial)
        if cells.setdefault(key, (r.seed, r.data_hash)) != (r.seed, r.data_hash):
            raise ValueError(f"cell N={r.N} trial={r.trial} saw different inputs across estimators")
    with open(path, "w") as fh:
        fh.write("# N trial seed data_hash\n")
        for (N, t), (seed, digest) in sorted(cells.items()):
            fh.write(f"{N} {t} {seed} {digest}\n")


def write_mse_plot_data(records, path, estimators=None):
    """Whitespace-delimited MSE-vs-N table for gnuplot."""
    rows = {(r.estimator, r.N): r for r in mse_report(records)}
    names = list(estimators or dict.fromkeys(r.estimator for r in records))
    Ns = sorted({r.N for r in records})
    with open(path, "w") as fh:
        cols = " ".join(f"{n}_mse_all {n}_se_all {n}_mse_dom" for n in names)
        fh.write(f"# N {cols}\n")
        for N in Ns:
            vals = []
            for n in names:
                row = rows.get((n, N))
                vals += [row.mse_all, row.se_all, row.mse_dom] if row else [math.nan] * 3
            fh.write(f"{N} " + " ".join(_fmt(float(v)) for v in vals) + "\n")


def cdf_grid(records, N, attr="sq_err_all", points=200):
    vals = np.array([getattr(r, attr) for r in records if r.N == N and r.ok], dtype=float)
    vals = vals[vals > 0]
    if vals.size == 0:
        return np.linspace(0.0, 1.0, points)
    return np.logspace(math.log10(vals.min()), math.log10(vals.max()), points)


def write_cdf_plot_data(records, N, path, attr="sq_err_all", estimators=None, points=200):
    """Empirical CDFs of per-trial squared error at one ``N`` for gnuplot."""
    names = list(estimators or dict.fromkeys(r.estimator for r in records))
    grid = cdf_grid(records, N, attr, points)
    columns = []
    for n in names:
        vals = [getattr(r, attr) for r in records if r.estimator == n and r.N == N and r.ok]
        columns.append([F for _, F in empirical_cdf(vals, grid)] if vals else [math.nan] * len(grid))
    with open(path, "w") as fh:
        fh.write(f"# {attr} " + " ".join(f"F_{n}" for n in names) + "\n")
        for i, x in enumerate(grid):
            fh.write(_fmt(float(x)) + " " + " ".join(_fmt(float(c[i])) for c in columns) + "\n")


def format_summary(records, cfg=None):
    rows = sorted(mse_report(records), key=lambda r: (r.N, r.estimator))
    lines = []
    if cfg is not None:
        lines.append(
            f"L={cfg.L} S={cfg.S} SNR={cfg.snr_db if cfg.snr_db is not None else 'noiseless'} dB "
            f"trials={cfg.trials} base_seed={cfg.base_seed} ds_debias={cfg.ds_debias}"
        )
    lines.append(f"{'N':>3} {'estimator':<8} {'M':>5} {'fail':>4} {'MSE_all':>12} {'SE':>10} "
                 f"{'MSE_dom':>12} {'NMSE':>10} {'time_s':>10}")
    for r in rows:
        lines.append(f"{r.N:>3} {r.estimator:<8} {r.trials:>5} {r.failed:>4} {r.mse_all:>12.5g} "
                     f"{r.se_all:>10.3g} {r.mse_dom:>12.5g} {r.nmse_all:>10.4g} {r.mean_elapsed:>10.3g}")
    lines.append(f"note: {TIMING_NOTE}")
    return "\n".join(lines) + "\n"


# -- config files --------------------------------------------------------------

def _parse_bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_snr(s):
    return None if s.strip().lower() == "noiseless" else float(s)


def _parse_opt_float(s):
    return None if s.strip().lower() in ("auto", "none") else float(s)


def _parse_list(conv):
    return lambda s: tuple(conv(p.strip()) for p in s.split(",") if p.strip())


_CONFIG_KEYS = {
    "L": int,
    "S": int,
    "amp_low": float,
    "amp_high": float,
    "snr_db": _parse_snr,
    "n_values": _parse_list(int),
    "trials": int,
    "base_seed": int,
    "estimators": _parse_list(str),
    "ds_debias": _parse_bool,
    "ds_lambda": _parse_opt_float,
}
assert set(_CONFIG_KEYS) == {f.name for f in fields(ExperimentConfig)}


def parse_config(text, source="<config>"):
    """Parse ``key = value`` lines into keyword arguments for :class:`ExperimentConfig`.

    ``#`` starts a comment; unknown keys and malformed values are errors.
    """
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            kwargs[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from exc
    return kwargs


def load_config(path, **overrides):
    with open(path) as fh:
        kwargs = parse_config(fh.read(), str(path))
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**kwargs)


def config_text(cfg):
    """Render a config in the ``key = value`` format read by :func:`parse_config`."""
    out = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            v = "noiseless" if f.name == "snr_db" else "auto"
        elif isinstance(v, tuple):
            v = ", ".join(str(x) for x in v)
        elif isinstance(v, bool):
            v = "true" if v else "false"
        out.append(f"{f.name} = {v}")
    return "\n".join(out) + "\n"
