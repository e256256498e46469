"""Text file formats for channels, training matrices and observations.

Channel file::

    L=<int> S=<int>
    <index>,<value>        # one line per nonzero tap

Training matrix: CSV, one matrix row per line.

Observation file::

    N=<int> noise_variance=<float> snr_db=<float|noiseless> seed=<token>
    <value>                # one received sample per line

Floats are written with 17 significant digits so they round-trip exactly.
"""

import re

import numpy as np

from .channel_model import Observation, SparseChannel


class FormatError(ValueError):
    """A file does not follow the documented format; carries the line number."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _g(x):
    return format(float(x), ".17g")


def write_channel(channel, path):
    with open(path, "w") as fh:
        fh.write(f"L={channel.L} S={channel.S}\n")
        for i in channel.support:
            fh.write(f"{int(i)},{_g(channel.taps[i])}\n")


def _header(path, line, keys):
    fields = {}
    for tok in line.split():
        if "=" not in tok:
            raise FormatError(path, 1, f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = v
    missing = [k for k in keys if k not in fields]
    if missing:
        raise FormatError(path, 1, f"missing header fields {missing}")
    return fields


def read_channel(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError(path, 1, "empty channel file")
    head = _header(path, lines[0], ("L", "S"))
    try:
        L, S = int(head["L"]), int(head["S"])
    except ValueError as exc:
        raise FormatError(path, 1, str(exc)) from exc
    taps = np.zeros(L)
    seen = []
    for n, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\S+)\s*", line)
        if not m:
            raise FormatError(path, n, f"expected '<index>,<value>', got {line!r}")
        i = int(m.group(1))
        if i >= L:
            raise FormatError(path, n, f"index {i} outside [0, {L})")
        if i in seen:
            raise FormatError(path, n, f"index {i} listed twice")
        try:
            taps[i] = float(m.group(2))
        except ValueError as exc:
            raise FormatError(path, n, str(exc)) from exc
        seen.append(i)
    if len(seen) != S:
        raise FormatError(path, len(lines), f"header says S={S} but {len(seen)} taps listed")
    return SparseChannel(taps, np.array(sorted(seen), dtype=np.intp))


def write_matrix(A, path):
    A = np.asarray(getattr(A, "matrix", A), dtype=float)
    with open(path, "w") as fh:
        for row in A:
            fh.write(",".join(_g(v) for v in row) + "\n")


def read_matrix(path):
    rows = []
    with open(path) as fh:
        for n, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise FormatError(path, n, str(exc)) from exc
            if len(rows[-1]) != len(rows[0]):
                raise FormatError(path, n, f"row has {len(rows[-1])} entries, expected {len(rows[0])}")
    if not rows:
        raise FormatError(path, 1, "empty matrix file")
    return np.array(rows)


def write_observation(obs, path):
    snr = "noiseless" if obs.snr_db is None else _g(obs.snr_db)
    seed = "-" if obs.noise_seed is None else ":".join(str(s) for s in np.atleast_1d(obs.noise_seed))
    with open(path, "w") as fh:
        fh.write(f"N={obs.received.shape[0]} noise_variance={_g(obs.noise_variance)} snr_db={snr} seed={seed}\n")
        for v in obs.received:
            fh.write(_g(v) + "\n")


def read_observation(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError(path, 1, "empty observation file")
    head = _header(path, lines[0], ("N", "noise_variance", "snr_db"))
    try:
        N = int(head["N"])
        var = float(head["noise_variance"])
        snr = None if head["snr_db"] == "noiseless" else float(head["snr_db"])
    except ValueError as exc:
        raise FormatError(path, 1, str(exc)) from exc
    vals = []
    for n, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            vals.append(float(line))
        except ValueError as exc:
            raise FormatError(path, n, str(exc)) from exc
    if len(vals) != N:
        raise FormatError(path, len(lines), f"header says N={N} but {len(vals)} samples listed")
    return Observation(np.array(vals), var, snr, head.get("seed"))
