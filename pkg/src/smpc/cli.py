"""Command-line interface: ``smpc gen | estimate | diagnose | bench``.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime or
estimator error, 3 benchmark completed with failed trials (or interrupted).
"""

import argparse
import math
import os
import sys

import numpy as np

from . import bench_harness as bh
from .channel_model import (
    build_toeplitz_training,
    generate_sparse_channel,
    synthesize_observation,
)
from .convex_baseline import DantzigConfig, estimate_dantzig
from .diagnostics import (
    RIP_GATE,
    coherence_report,
    ric_bruteforce,
    rip_sample,
)
from .errors import CombinatorialLimitError, DegenerateSignalError, ShapeError, SmpcError, SparsityError
from .estimators import CosampConfig, estimate_cosamp, estimate_ls, estimate_omp, estimate_oracle_ls
from .fileio import (
    FormatError,
    read_channel,
    read_matrix,
    read_observation,
    write_channel,
    write_matrix,
    write_observation,
)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_PARTIAL = 0, 1, 2, 3
ALGOS = ("cosamp", "omp", "ls", "oracle", "ds")


class UsageError(Exception):
    pass


def _snr(text):
    # keep the literal so "noiseless" stays distinguishable from "not given"
    if text.lower() == "noiseless":
        return "noiseless"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"SNR must be a number of dB or 'noiseless', got {text!r}")


def _int_list(text):
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text):
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _synth(L, S, N, seed, snr, amp_low=0.2, amp_high=1.0):
    # same seed streams as one bench cell with trial seed ``seed``
    snr = None if snr == "noiseless" else snr
    channel = generate_sparse_channel(L, S, amp_low, amp_high, [seed, 0])
    X = build_toeplitz_training(N, L, [seed, 1, N])
    obs = synthesize_observation(X, channel, snr, [seed, 2, N])
    return channel, X, obs


# -- gen -----------------------------------------------------------------------

def cmd_gen(args, out=sys.stdout):
    try:
        channel, X, obs = _synth(args.L, args.S, args.N, args.seed, args.snr, args.amp_low, args.amp_high)
    except (SparsityError, ShapeError, DegenerateSignalError, ValueError) as exc:
        raise UsageError(str(exc))
    os.makedirs(args.out_dir, exist_ok=True)
    paths = {
        "channel": os.path.join(args.out_dir, "channel.txt"),
        "training": os.path.join(args.out_dir, "training.csv"),
        "observation": os.path.join(args.out_dir, "observation.txt"),
    }
    write_channel(channel, paths["channel"])
    write_matrix(X, paths["training"])
    write_observation(obs, paths["observation"])
    rep = coherence_report(X, args.S, args.c1)
    for k, p in paths.items():
        print(f"wrote {k}: {p}", file=out)
    print(f"mu_X = {rep.mu:.17g}", file=out)
    print(f"length bound (advisory, C1={rep.c1:g}, natural log): N >= {rep.bound_rhs:.6g} "
          f"-> {'satisfied' if rep.satisfied else 'not satisfied'} at N={args.N}", file=out)
    return EXIT_OK


# -- estimate ------------------------------------------------------------------

def _load_problem(args):
    files = [args.matrix, args.observation, args.channel]
    synth = [args.L, args.N, args.seed, args.snr]
    if any(f is not None for f in files):
        if any(v is not None for v in synth):
            raise UsageError("give either input files or synthesis flags (--L/--N/--seed/--snr), not both")
        if args.matrix is None or args.observation is None:
            raise UsageError("--matrix and --observation are both required when reading files")
        X = read_matrix(args.matrix)
        obs = read_observation(args.observation)
        channel = read_channel(args.channel) if args.channel else None
        if obs.received.shape[0] != X.shape[0]:
            raise UsageError(f"observation has {obs.received.shape[0]} samples but matrix has {X.shape[0]} rows")
        if channel is not None and channel.L != X.shape[1]:
            raise UsageError(f"channel length {channel.L} does not match {X.shape[1]} matrix columns")
        S = args.S if args.S is not None else (channel.S if channel else None)
        return X, obs, channel, S
    L = 50 if args.L is None else args.L
    N = 35 if args.N is None else args.N
    S = 5 if args.S is None else args.S
    seed = 0 if args.seed is None else args.seed
    snr = 10.0 if args.snr is None else args.snr
    try:
        channel, X, obs = _synth(L, S, N, seed, snr)
    except (SparsityError, ShapeError, DegenerateSignalError, ValueError) as exc:
        raise UsageError(str(exc))
    return X.matrix, obs, channel, S


def cmd_estimate(args, out=sys.stdout):
    algos = _name_list(args.algo)
    bad = [a for a in algos if a not in ALGOS]
    if bad or not algos:
        raise UsageError(f"unknown --algo {bad}; choose from {', '.join(ALGOS)}")
    X, obs, channel, S = _load_problem(args)
    y = obs.received
    if "oracle" in algos and channel is None:
        raise UsageError("--algo oracle needs the true support: pass --channel or use synthesis flags")
    if S is None and any(a in ("cosamp", "omp", "ds", "oracle") for a in algos):
        raise UsageError("sparsity unknown: pass --S or --channel")
    results = {}
    for a in algos:
        if a == "cosamp":
            results[a] = estimate_cosamp(X, y, CosampConfig(S))
        elif a == "omp":
            results[a] = estimate_omp(X, y, S)
        elif a == "ls":
            results[a] = estimate_ls(X, y)
        elif a == "oracle":
            results[a] = estimate_oracle_ls(X, y, channel.support)
        elif a == "ds":
            cfg = DantzigConfig(lam=args.lam, debias=not args.no_debias)
            results[a] = estimate_dantzig(X, y, math.sqrt(obs.noise_variance), S, cfg)
    for a, est in results.items():
        line = f"{a:<7}"
        if channel is not None:
            err = est.taps - channel.taps
            sq = float(err @ err)
            line += f" sq_err={sq:.6e} rel_err={math.sqrt(sq) / np.linalg.norm(channel.taps):.6e}"
        if est.support.size <= 20:
            support = "[" + ",".join(str(int(i)) for i in est.support) + "]"
        else:
            support = f"<{est.support.size} taps>"
        line += f" iterations={est.iterations} support={support}"
        print(line, file=out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("estimator,index,value\n")
            for a, est in results.items():
                for i in np.flatnonzero(est.taps):
                    fh.write(f"{a},{int(i)},{format(float(est.taps[i]), '.17g')}\n")
    return EXIT_OK


# -- diagnose ------------------------------------------------------------------

def cmd_diagnose(args, out=sys.stdout):
    sources = sum(x is not None for x in (args.matrix, args.identity)) + (args.N is not None)
    if sources > 1:
        raise UsageError("choose one matrix source: --matrix, --identity or --L/--N/--seed")
    if args.ric_exact and args.ric_sample is not None:
        raise UsageError("--ric-exact and --ric-sample are mutually exclusive")
    if args.matrix is not None:
        A = read_matrix(args.matrix)
    elif args.identity is not None:
        A = np.eye(args.identity)
    else:
        L = 50 if args.L is None else args.L
        N = 25 if args.N is None else args.N
        try:
            A = build_toeplitz_training(N, L, [0 if args.seed is None else args.seed, 1, N]).matrix
        except ShapeError as exc:
            raise UsageError(str(exc))
    S = args.S
    N, L = A.shape
    if not 1 <= 2 * S <= L:
        raise UsageError(f"need 1 <= 2S <= L, got S={S}, L={L}")
    rep = coherence_report(A, S, args.c1)
    print(f"matrix: {N} x {L}", file=out)
    print(f"mu_X = {rep.mu:.17g}", file=out)
    print(f"mutual coherence max|<x_i,x_j>| = {rep.mutual_coherence:.12g}", file=out)
    print(f"length bound (advisory, C1={rep.c1:g}, natural log): N >= {rep.bound_rhs:.6g} "
          f"-> {'satisfied' if rep.satisfied else 'not satisfied'}", file=out)
    try:
        if args.ric_sample is not None:
            r1 = rip_sample(A, S, args.ric_sample, args.seed)
            r2 = rip_sample(A, 2 * S, args.ric_sample, args.seed)
        else:
            r1 = ric_bruteforce(A, S)
            r2 = ric_bruteforce(A, 2 * S)
    except CombinatorialLimitError as exc:
        raise UsageError(f"{exc} (rerun with --ric-sample TRIALS)")
    for r in (r1, r2):
        print(f"delta_{r.order} = {r.delta:.12g} [{r.label}, {r.supports_checked} supports] "
              f"worst support {list(map(int, r.worst_support))}", file=out)
    gate = r2.delta <= RIP_GATE
    qualifier = "" if r2.exact else " (lower bound only: a 'satisfied' verdict is not certified)"
    print(f"gate delta_{2 * S} <= sqrt(2)-1: {'satisfied' if gate else 'violated'}{qualifier}", file=out)
    return EXIT_OK


# -- bench ---------------------------------------------------------------------

def _bench_config(args):
    overrides = dict(
        L=args.L, S=args.S, snr_db=args.snr, n_values=args.n_values, trials=args.trials,
        base_seed=args.seed, estimators=args.estimators, ds_lambda=args.ds_lambda,
    )
    if args.no_ds_debias:
        overrides["ds_debias"] = False
    if args.snr_noiseless and args.snr is not None:
        raise UsageError("--snr and --noiseless are mutually exclusive")
    try:
        if args.config:
            cfg = bh.load_config(args.config, **overrides)
        else:
            cfg = bh.ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad benchmark configuration: {exc}")
    if args.snr_noiseless:
        cfg.snr_db = None
    return cfg


def write_bench_outputs(records, cfg, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    records = bh.sort_records(records, cfg.estimators)
    bh.write_csv(records, os.path.join(out_dir, "trials.csv"))
    bh.write_seed_log(records, os.path.join(out_dir, "seeds.txt"))
    with open(os.path.join(out_dir, "config.txt"), "w") as fh:
        fh.write(bh.config_text(cfg))
    if any(r.ok for r in records):
        bh.write_mse_plot_data(records, os.path.join(out_dir, "mse_vs_n.dat"), cfg.estimators)
        for N in sorted({r.N for r in records}):
            for attr, tag in (("sq_err_all", "all"), ("sq_err_dom", "dom")):
                bh.write_cdf_plot_data(records, N, os.path.join(out_dir, f"cdf_{tag}_N{N}.dat"),
                                       attr, cfg.estimators)
    summary = bh.format_summary(records, cfg)
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write(summary)
    return summary


def cmd_bench(args, out=sys.stdout):
    if args.serial and args.jobs not in (None, 1):
        raise UsageError("--serial conflicts with --jobs > 1")
    jobs = 1 if args.serial or args.jobs is None else args.jobs
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    cfg = _bench_config(args)
    records = []
    interrupted = False
    try:
        for cell in bh.iter_experiment(cfg, jobs):
            records.extend(cell)
    except KeyboardInterrupt:
        interrupted = True
    summary = write_bench_outputs(records, cfg, args.out_dir)
    out.write(summary)
    failed = sum(not r.ok for r in records)
    if jobs > 1:
        print(f"warning: {jobs} workers were used; contention inflates elapsed times "
              "(use --serial for timing runs)", file=out)
    if interrupted:
        print(f"interrupted: partial results ({len(records)} records) written to {args.out_dir}", file=out)
        return EXIT_PARTIAL
    if failed:
        print(f"{failed} of {len(records)} estimator runs failed; see status column", file=out)
        return EXIT_PARTIAL
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="smpc", description="Sparse multipath channel estimation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a channel, training matrix and observation")
    g.add_argument("--L", type=int, default=50)
    g.add_argument("--S", type=int, default=5)
    g.add_argument("--N", type=int, default=35)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--snr", type=_snr, default=10.0, help="dB or 'noiseless'")
    g.add_argument("--amp-low", type=float, default=0.2)
    g.add_argument("--amp-high", type=float, default=1.0)
    g.add_argument("--c1", type=float, default=1.0)
    g.add_argument("--out-dir", default=".")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("estimate", help="run estimators on one instance")
    e.add_argument("--matrix")
    e.add_argument("--observation")
    e.add_argument("--channel")
    e.add_argument("--L", type=int)
    e.add_argument("--N", type=int)
    e.add_argument("--S", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--snr", type=_snr)
    e.add_argument("--algo", default="cosamp", help=f"comma-separated subset of {','.join(ALGOS)}")
    e.add_argument("--lambda", dest="lam", type=float, help="Dantzig threshold (default sigma*sqrt(2 ln L))")
    e.add_argument("--no-debias", action="store_true", help="skip the LS refit after the Dantzig LP")
    e.add_argument("--out", help="write nonzero taps of every estimate to this CSV")
    e.set_defaults(func=cmd_estimate)

    d = sub.add_parser("diagnose", help="coherence and restricted isometry diagnostics")
    d.add_argument("--matrix")
    d.add_argument("--identity", type=int, metavar="L")
    d.add_argument("--L", type=int)
    d.add_argument("--N", type=int)
    d.add_argument("--seed", type=int)
    d.add_argument("--S", type=int, default=1)
    d.add_argument("--c1", type=float, default=1.0)
    d.add_argument("--ric-exact", action="store_true", help="exhaustive RIC (default)")
    d.add_argument("--ric-sample", type=int, metavar="TRIALS", help="sampled lower bound on the RIC")
    d.set_defaults(func=cmd_diagnose)

    b = sub.add_parser("bench", help="Monte-Carlo benchmark")
    b.add_argument("--config", help="key = value configuration file")
    b.add_argument("--L", type=int)
    b.add_argument("--S", type=int)
    b.add_argument("--snr", type=float)
    b.add_argument("--noiseless", dest="snr_noiseless", action="store_true")
    b.add_argument("--n-values", type=_int_list)
    b.add_argument("--trials", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--estimators", type=_name_list)
    b.add_argument("--ds-lambda", type=float)
    b.add_argument("--no-ds-debias", action="store_true")
    b.add_argument("--jobs", type=int)
    b.add_argument("--serial", action="store_true")
    b.add_argument("--out-dir", default="bench_out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, FormatError, ValueError) as exc:
        print(f"smpc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SmpcError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"smpc {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
