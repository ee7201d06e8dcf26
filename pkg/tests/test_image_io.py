import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dtle import ParseError, ShapeError, load_pgm, read_pgm, save_pgm, write_pgm


class TestReadPgm:
    def test_two_by_two(self):
        img = read_pgm(b"P5\n2 2\n255\n" + bytes([0, 255, 7, 9]))
        assert img.dtype == np.uint8
        assert img.tolist() == [[0, 255], [7, 9]]

    def test_single_pixel(self):
        assert read_pgm(b"P5\n1 1\n255\n" + bytes([128])).tolist() == [[128]]

    def test_comments_are_skipped(self):
        data = b"P5\n# made by hand\n3 # width\n1\n# maxval next\n255\n" + bytes([1, 2, 3])
        assert read_pgm(data).tolist() == [[1, 2, 3]]

    def test_width_then_height(self):
        img = read_pgm(b"P5 3 2 255 " + bytes(range(6)))
        assert img.shape == (2, 3)
        assert img[1].tolist() == [3, 4, 5]

    @pytest.mark.parametrize(
        "data, offset",
        [
            (b"P2\n2 2\n255\n" + bytes(4), 0),
            (b"P5\n2 2\n65535\n" + bytes(8), 7),
            (b"P5\nx 2\n255\n" + bytes(4), 3),
            (b"P5\n2 2\n255\n" + bytes(3), 14),
            (b"P5\n0 2\n255\n", 3),
            (b"P5\n2 2\n", 7),
        ],
    )
    def test_malformed_input_reports_offset(self, data, offset):
        with pytest.raises(ParseError) as info:
            read_pgm(data)
        assert info.value.offset == offset
        assert f"at byte {offset}" in str(info.value)

    def test_trailing_bytes_ignored(self):
        assert read_pgm(b"P5\n1 1\n255\n" + bytes([5, 6])).tolist() == [[5]]


class TestWritePgm:
    def test_canonical_header(self):
        assert write_pgm(np.array([[128]], dtype=np.uint8)) == b"P5\n1 1\n255\n" + bytes([128])

    def test_two_by_three_header(self):
        assert write_pgm(np.zeros((2, 3), dtype=np.uint8)).startswith(b"P5\n3 2\n255\n")

    def test_rejects_out_of_range_values(self):
        with pytest.raises(ShapeError):
            write_pgm(np.array([[256]]))

    def test_rejects_non_2d(self):
        with pytest.raises(ShapeError):
            write_pgm(np.zeros((2, 2, 3), dtype=np.uint8))

    def test_random_16x16_roundtrip(self, rng):
        img = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        assert np.array_equal(read_pgm(write_pgm(img)), img)

    def test_file_roundtrip(self, tmp_path, rng):
        img = rng.integers(0, 256, size=(5, 7), dtype=np.uint8)
        path = tmp_path / "x.pgm"
        save_pgm(path, img)
        assert np.array_equal(load_pgm(path), img)


@given(arrays(np.uint8, st.tuples(st.integers(1, 20), st.integers(1, 20))))
def test_roundtrip_property(img):
    assert np.array_equal(read_pgm(write_pgm(img)), img)
