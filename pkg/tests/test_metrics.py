import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dtle import ShapeError, embedding_rate, psnr, spe


class TestPsnr:
    def test_identical(self):
        img = np.full((4, 4), 9, np.uint8)
        assert psnr(img, img) == math.inf

    def test_single_pixel_full_swing(self):
        a = np.zeros((512, 512), np.uint8)
        b = a.copy()
        b[7, 9] = 255
        assert psnr(a, b) == pytest.approx(10 * math.log10(262144), abs=1e-9)
        assert psnr(a, b) == pytest.approx(54.19, abs=0.01)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            psnr(np.zeros((2, 2)), np.zeros((2, 3)))

    @given(
        arrays(np.uint8, (6, 5)),
        arrays(np.uint8, (6, 5)),
    )
    def test_symmetric(self, a, b):
        assert psnr(a, b) == psnr(b, a)


class TestRates:
    @pytest.mark.parametrize("ec, pixels, rate", [(0, 262144, 0.0), (262144, 262144, 1.0), (131072, 262144, 0.5)])
    def test_embedding_rate(self, ec, pixels, rate):
        assert embedding_rate(ec, pixels) == rate

    def test_zero_pixels(self):
        with pytest.raises(ValueError):
            embedding_rate(1, 0)

    def test_spe_examples(self):
        assert spe([5, 6, 7], 5) == 100.0
        assert spe([5, 6, 7], 8) == 0.0
        assert spe([100000, 200000, 300000], 200000) == pytest.approx(66.67, abs=0.01)

    def test_spe_empty(self):
        with pytest.raises(ValueError):
            spe([], 1)

    @given(st.lists(st.integers(0, 10**6), min_size=1, max_size=50), st.integers(0, 10**6), st.integers(0, 10**6))
    def test_spe_monotone(self, caps, t1, t2):
        lo, hi = sorted((t1, t2))
        assert spe(caps, lo) >= spe(caps, hi)
