import numpy as np
import pytest

from smpc.channel_model import NOISELESS, build_toeplitz_training, generate_sparse_channel, synthesize_observation
from smpc.fileio import (
    FormatError,
    read_channel,
    read_matrix,
    read_observation,
    write_channel,
    write_matrix,
    write_observation,
)


def test_channel_round_trip(tmp_path):
    h = generate_sparse_channel(50, 5, seed=4)
    write_channel(h, tmp_path / "c.txt")
    text = (tmp_path / "c.txt").read_text().splitlines()
    assert text[0] == "L=50 S=5"
    assert len(text) == 6
    back = read_channel(tmp_path / "c.txt")
    assert back.taps.tobytes() == h.taps.tobytes()
    np.testing.assert_array_equal(back.support, h.support)


def test_matrix_round_trip(tmp_path):
    X = build_toeplitz_training(15, 50, seed=2)
    write_matrix(X, tmp_path / "x.csv")
    back = read_matrix(tmp_path / "x.csv")
    assert back.tobytes() == X.matrix.tobytes()


@pytest.mark.parametrize("snr", [10.0, NOISELESS])
def test_observation_round_trip(tmp_path, snr):
    X = build_toeplitz_training(15, 50, seed=2)
    h = generate_sparse_channel(50, 5, seed=4)
    obs = synthesize_observation(X, h, snr, seed=[1, 2, 15])
    write_observation(obs, tmp_path / "o.txt")
    back = read_observation(tmp_path / "o.txt")
    assert back.received.tobytes() == obs.received.tobytes()
    assert back.noise_variance == obs.noise_variance
    assert back.snr_db == snr


@pytest.mark.parametrize("content, line", [
    ("L=5 S=1\n0,1.0\n9,2.0\n", 3),
    ("L=5 S=2\n0,1.0\n0,2.0\n", 3),
    ("L=5 S=1\nabc\n", 2),
    ("L=5\n", 1),
    ("L=5 S=2\n0,1.0\n", 2),
])
def test_channel_errors(tmp_path, content, line):
    p = tmp_path / "c.txt"
    p.write_text(content)
    with pytest.raises(FormatError) as info:
        read_channel(p)
    assert info.value.line == line


def test_matrix_ragged(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("1,2\n3\n")
    with pytest.raises(FormatError, match=":2:"):
        read_matrix(p)


def test_observation_count_mismatch(tmp_path):
    p = tmp_path / "o.txt"
    p.write_text("N=3 noise_variance=0 snr_db=noiseless seed=-\n1\n2\n")
    with pytest.raises(FormatError, match="N=3"):
        read_observation(p)
