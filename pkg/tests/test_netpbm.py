import io

import numpy as np
import pytest

from ssmodes.netpbm import NetpbmError, decode, encode, read_pgm, read_ppm, write_pgm, write_ppm


def test_binary_pgm_header():
    img = decode(b"P5 2 2 255\n" + bytes([0, 1, 2, 3]))
    assert img.shape == (2, 2) and img.tolist() == [[0, 1], [2, 3]]


def test_ascii_with_comments():
    data = b"P2\n# made by hand\n3 1 # width height\n255\n10 20\n# mid\n30\n"
    assert decode(data).tolist() == [[10, 20, 30]]


def test_ascii_ppm():
    img = decode(b"P3 1 2 255 1 2 3 4 5 6")
    assert img.shape == (2, 1, 3) and img[1, 0].tolist() == [4, 5, 6]


def test_pgm_round_trip(tmp_path, rng):
    img = rng.integers(0, 256, (7, 11)).astype(np.uint8)
    write_pgm(tmp_path / "a.pgm", img)
    np.testing.assert_array_equal(read_pgm(tmp_path / "a.pgm"), img)
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5\n11 7\n255\n")


def test_ppm_round_trip_stream(rng):
    img = rng.integers(0, 256, (5, 3, 3)).astype(np.uint8)
    buf = io.BytesIO()
    write_ppm(buf, img)
    buf.seek(0)
    np.testing.assert_array_equal(read_ppm(buf), img)
    assert encode(img).startswith(b"P6")


@pytest.mark.parametrize("data, token", [
    (b"P5 2 2 65535\n" + bytes(8), "65535"),
    (b"P7 2 2 255\n", "P7"),
    (b"P5 x 2 255\n", "x"),
    (b"P5 2 2 255\n" + bytes(3), "expected 4"),
    (b"P5 2", "truncated"),
])
def test_malformed(data, token):
    with pytest.raises(NetpbmError, match=token):
        decode(data)


def test_kind_mismatch(tmp_path):
    write_ppm(tmp_path / "c.ppm", np.zeros((2, 2, 3), dtype=np.uint8))
    with pytest.raises(NetpbmError, match="PGM"):
        read_pgm(tmp_path / "c.ppm")
