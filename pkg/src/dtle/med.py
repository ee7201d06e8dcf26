"""Median edge detector (LOCO-I) forward transform to a nonnegative difference image, and its inverse.

The first row and column are carried verbatim. Every other cell holds the
prediction residual ``x - med(a, b, c)`` (left, above, above-left taken from
the original image) lifted by ``shift`` so the minimum is zero. Residuals that
land above 255 are clamped and the excess is stored in :class:`AuxInfo`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .bits import BitReader, int_to_bits
from .errors import CorruptionError, ShapeError
from .image_io import as_gray

ROW_BITS = 16
COL_BITS = 16
EXCESS_BITS = 8
RECORD_BITS = ROW_BITS + COL_BITS + EXCESS_BITS


def med_predict(a: int, b: int, c: int) -> int:
    if c <= min(a, b):
        return max(a, b)
    if c >= max(a, b):
        return min(a, b)
    return a + b - c


def _med_predict_array(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return np.where(c <= lo, hi, np.where(c >= hi, lo, a + b - c))


@dataclass(frozen=True)
class AuxInfo:
    """Side data needed to invert :func:`med_forward`.

    ``overflow_records`` holds ``(row, col, excess)`` triples with 1-indexed
    coordinates, in raster order.
    """

    shift: int = 0
    overflow_records: tuple[tuple[int, int, int], ...] = field(default_factory=tuple)

    @property
    def overflow_flag(self) -> int:
        return int(bool(self.overflow_records))

    @property
    def bit_length(self) -> int:
        return 9 + RECORD_BITS * len(self.overflow_records)

    def to_bits(self) -> np.ndarray:
        parts = [int_to_bits(self.shift, 8), np.array([self.overflow_flag], dtype=np.uint8)]
        for row, col, excess in self.overflow_records:
            parts += [int_to_bits(row, ROW_BITS), int_to_bits(col, COL_BITS), int_to_bits(excess, EXCESS_BITS)]
        return np.concatenate(parts)

    @classmethod
    def from_bits(cls, bits, n_over: int) -> AuxInfo:
        reader = BitReader(bits)
        shift = reader.read_int(8)
        flag = reader.read_int(1)
        if flag != int(n_over > 0):
            raise CorruptionError(f"overflow flag {flag} disagrees with {n_over} overflow records")
        records = tuple(
            (reader.read_int(ROW_BITS), reader.read_int(COL_BITS), reader.read_int(EXCESS_BITS))
            for _ in range(n_over)
        )
        if reader.remaining:
            raise CorruptionError(f"{reader.remaining} stray bits after auxiliary information")
        return cls(shift=shift, overflow_records=records)


def med_forward(img) -> tuple[np.ndarray, AuxInfo]:
    x = as_gray(img, min_size=2).astype(np.int64)
    h, w = x.shape
    if h > (1 << ROW_BITS) - 1 or w > (1 << COL_BITS) - 1:
        raise ShapeError(f"image {h}x{w} too large for 16-bit overflow coordinates")
    pred = _med_predict_array(x[1:, :-1], x[:-1, 1:], x[:-1, :-1])
    diff = x[1:, 1:] - pred
    shift = max(0, -int(diff.min()))
    lifted = diff + shift
    over_r, over_c = np.nonzero(lifted > 255)
    records = tuple(
        (int(r) + 2, int(c) + 2, int(lifted[r, c]) - 255) for r, c in zip(over_r, over_c)
    )
    out = x.copy()
    out[1:, 1:] = np.minimum(lifted, 255)
    return out.astype(np.uint8), AuxInfo(shift=shift, overflow_records=records)


@njit(cache=True)
def _med_inverse_kernel(d, excess, shift, out):
    h, w = d.shape
    for i in range(h):
        out[i, 0] = d[i, 0]
    for j in range(w):
        out[0, j] = d[0, j]
    for i in range(1, h):
        for j in range(1, w):
            a = out[i, j - 1]
            b = out[i - 1, j]
            c = out[i - 1, j - 1]
            lo = min(a, b)
            hi = max(a, b)
            if c <= lo:
                p = hi
            elif c >= hi:
                p = lo
            else:
                p = a + b - c
            v = d[i, j] + excess[i, j] - shift + p
            if v < 0 or v > 255:
                return i, j
            out[i, j] = v
    return -1, -1


def med_inverse(diff, aux: AuxInfo) -> np.ndarray:
    d = as_gray(diff, min_size=2).astype(np.int64)
    h, w = d.shape
    excess = np.zeros_like(d)
    for row, col, extra in aux.overflow_records:
        if not (2 <= row <= h and 2 <= col <= w):
            raise CorruptionError(f"overflow record at ({row}, {col}) is outside the interior")
        excess[row - 1, col - 1] = extra
    out = np.empty_like(d)
    bad_i, bad_j = _med_inverse_kernel(d, excess, int(aux.shift), out)
    if bad_i >= 0:
        raise CorruptionError(f"MED inversion left [0, 255] at ({bad_i + 1}, {bad_j + 1})")
    return out.astype(np.uint8)
