import itertools

import numpy as np
import pytest

from dtle import PixelOverflowError, PositionError, embed_pixel, extract_pixel, predictor_pair
from dtle.tle import tle_embed_pixel, tle_extract_pixel, tle_predictors


def replay_embed(v, p1, p2, bits):
    """Scalar replay of the two-layer double-peak rule; returns (v'', consumed bits)."""
    queue = list(bits)
    used = []

    def layer(x, p):
        e = x - p
        if e in (0, 1):
            b = queue.pop(0) if queue else 0
            used.append(b)
            return x + b if e == 1 else x - b
        return x + 1 if e > 1 else x - 1

    return layer(layer(v, p1), p2), tuple(used)


def replay_extract(v2, p1, p2):
    bits = []

    def undo(x, p):
        e = x - p
        if e in (-1, 2):
            bits.append(1)
            return x + 1 if e == -1 else x - 1
        if e in (0, 1):
            bits.append(0)
            return x
        return x + 1 if e < -1 else x - 1

    v1 = undo(v2, p2)
    v = undo(v1, p1)
    return v, tuple(reversed(bits))


# 1-indexed 5x5 HSB plane (n=2) around the pixel at (3, 3) with value 40.
FIG_PLANE = np.array(
    [
        [40, 40, 40, 40, 40],
        [40, 39, 37, 40, 40],
        [40, 39, 40, 42, 40],
        [40, 40, 43, 41, 40],
        [40, 40, 40, 40, 40],
    ]
)


class TestPredictorPair:
    def test_constant(self):
        assert predictor_pair(np.full((3, 3), 40), 1, 1) == (40, 40)

    def test_one_to_eight(self):
        plane = np.array([[1, 2, 3], [4, 0, 5], [6, 7, 8]])
        assert predictor_pair(plane, 1, 1) == (3, 5)

    def test_constructed_ring(self):
        ring = [38, 38, 39, 39, 40, 40, 41, 41]
        plane = np.array([ring[:3], [ring[3], 0, ring[4]], ring[5:]])
        assert predictor_pair(plane, 1, 1) == (39, 40)

    def test_worked_example_plane(self):
        assert predictor_pair(FIG_PLANE, 2, 2) == (39, 40)

    @pytest.mark.parametrize("i, j", [(0, 1), (1, 0), (2, 1), (1, 2), (-1, 1)])
    def test_border_positions(self, i, j):
        with pytest.raises(PositionError):
            predictor_pair(np.zeros((3, 3)), i, j)

    def test_p1_not_above_p2(self, rng):
        for _ in range(200):
            plane = rng.integers(0, 64, size=(3, 3))
            p1, p2 = predictor_pair(plane, 1, 1)
            assert p1 <= p2


class TestEmbedPixel:
    def test_worked_example(self):
        p1, p2 = predictor_pair(FIG_PLANE, 2, 2)
        v2, used = embed_pixel(40, p1, p2, (1, 1))
        assert (v2, used) == (42, 2)
        assert (v2 << 2) | 3 == 171

    def test_pure_shifts(self):
        assert embed_pixel(10, 15, 12, (1, 1)) == (8, 0)

    def test_zero_bit_at_first_peak(self):
        v2, used = embed_pixel(40, 40, 40, (0, 1))
        assert used == 2 and v2 == 39

    def test_missing_bits_pad_with_zero(self):
        assert embed_pixel(40, 39, 40, (1,)) == embed_pixel(40, 39, 40, (1, 0))

    def test_overflow(self):
        with pytest.raises(PixelOverflowError):
            embed_pixel(63, 60, 60, (), vmax=63)


class TestExtractPixel:
    def test_worked_example(self):
        assert extract_pixel(42, 39, 40) == (40, (1, 1))

    def test_pure_shift_inverse(self):
        assert extract_pixel(8, 15, 12) == (10, ())

    def test_exhaustive_against_replay(self):
        for p1, p2 in itertools.combinations_with_replacement(range(0, 64, 3), 2):
            for v in range(2, 62):
                for bits in ((0, 0), (0, 1), (1, 0), (1, 1)):
                    v2, used = embed_pixel(v, p1, p2, bits)
                    ref_v2, ref_bits = replay_embed(v, p1, p2, bits)
                    assert (v2, bits[:used]) == (ref_v2, ref_bits)
                    assert extract_pixel(v2, p1, p2) == (v, ref_bits) == replay_extract(v2, p1, p2)


class TestTlePixel:
    def test_predictors(self):
        assert tle_predictors(np.full((3, 3), 20), 1, 1) == (20, 20)
        plane = np.array([[0, 18, 0], [19, 20, 21], [0, 22, 0]])
        assert tle_predictors(plane, 1, 1) == (19, 20)

    def test_worked_example(self):
        hsb5 = FIG_PLANE * 4 + 3 >> 3
        p1, p2 = tle_predictors(hsb5, 2, 2)
        assert (p1, p2) == (19, 20)
        v2, used = tle_embed_pixel(20, p1, p2, (1, 1))
        assert (v2, used) == (21, 1)
        assert (v2 << 3) | 3 == 171
        assert tle_extract_pixel(21, p1, p2) == (20, (1,))

    def test_unchanged_pixel(self):
        assert tle_embed_pixel(20, 21, 19, (1, 1)) == (20, 0)

    def test_border(self):
        with pytest.raises(PositionError):
            tle_predictors(np.zeros((3, 3)), 0, 0)

    def test_exhaustive_roundtrip(self):
        for p1, p2 in itertools.combinations_with_replacement(range(0, 32), 2):
            for v in range(1, 31):
                for bits in ((0, 0), (0, 1), (1, 0), (1, 1)):
                    v2, used = tle_embed_pixel(v, p1, p2, bits)
                    assert abs(v2 - v) <= 1
                    assert tle_extract_pixel(v2, p1, p2) == (v, bits[:used])
