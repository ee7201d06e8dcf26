"""Predictors and single-pixel embedding rules on the HSB plane.

Two rule families share one interface:

* DTLE: predictors from the 8-neighbourhood (means of the six smallest and six
  largest neighbours), and both layers expand the two error peaks 0 and 1.
* TLE: predictors from the 4-neighbourhood (means of the three smallest and
  three largest), layer one expands error 1 upward and layer two expands
  error -1 downward.

The numba kernels take the next two payload bits explicitly; a layer that
carries data consumes the first bit not yet used by this pixel.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .errors import PixelOverflowError, PositionError

DTLE = 0
TLE = 1


@njit(cache=True)
def dtle_predictors(plane, i, j):
    z = np.empty(8, dtype=np.int64)
    k = 0
    for di in range(-1, 2):
        for dj in range(-1, 2):
            if di != 0 or dj != 0:
                z[k] = plane[i + di, j + dj]
                k += 1
    z.sort()
    total = z.sum()
    return (total - z[6] - z[7]) // 6, (total - z[0] - z[1]) // 6


@njit(cache=True)
def tle_predictors(plane, i, j):
    a = np.int64(plane[i - 1, j])
    b = np.int64(plane[i + 1, j])
    c = np.int64(plane[i, j - 1])
    d = np.int64(plane[i, j + 1])
    total = a + b + c + d
    return (total - max(max(a, b), max(c, d))) // 3, (total - min(min(a, b), min(c, d))) // 3


@njit(cache=True)
def dtle_embed_rule(v, p1, p2, bit_a, bit_b):
    used = 0
    e1 = v - p1
    if e1 == 1:
        v1 = v + bit_a
        used = 1
    elif e1 > 1:
        v1 = v + 1
    elif e1 == 0:
        v1 = v - bit_a
        used = 1
    else:
        v1 = v - 1
    bit = bit_b if used == 1 else bit_a
    e2 = v1 - p2
    if e2 == 1:
        v2 = v1 + bit
        used += 1
    elif e2 > 1:
        v2 = v1 + 1
    elif e2 == 0:
        v2 = v1 - bit
        used += 1
    else:
        v2 = v1 - 1
    return v2, used


@njit(cache=True)
def _dtle_undo_layer(v, p):
    # Returns (restored value, carried a bit?, bit).
    e = v - p
    if e == -1:
        return v + 1, True, 1
    if e == 2:
        return v - 1, True, 1
    if e == 0 or e == 1:
        return v, True, 0
    if e < -1:
        return v + 1, False, 0
    return v - 1, False, 0


@njit(cache=True)
def dtle_extract_rule(v2, p1, p2):
    """Returns ``(v, count, first, second)`` with recovered bits in embedding order."""
    v1, has2, b2 = _dtle_undo_layer(v2, p2)
    v, has1, b1 = _dtle_undo_layer(v1, p1)
    if has1 and has2:
        return v, 2, b1, b2
    if has1:
        return v, 1, b1, 0
    if has2:
        return v, 1, b2, 0
    return v, 0, 0, 0


@njit(cache=True)
def tle_embed_rule(v, p1, p2, bit_a, bit_b):
    used = 0
    e1 = v - p1
    if e1 == 1:
        v1 = v + bit_a
        used = 1
    elif e1 > 1:
        v1 = v + 1
    else:
        v1 = v
    bit = bit_b if used == 1 else bit_a
    e2 = v1 - p2
    if e2 == -1:
        v2 = v1 - bit
        used += 1
    elif e2 < -1:
        v2 = v1 - 1
    else:
        v2 = v1
    return v2, used


@njit(cache=True)
def tle_extract_rule(v2, p1, p2):
    has2 = False
    b2 = 0
    e2 = v2 - p2
    if e2 == -1 or e2 == -2:
        has2 = True
        b2 = -1 - e2
        v1 = p2 - 1
    elif e2 < -2:
        v1 = v2 + 1
    else:
        v1 = v2
    has1 = False
    b1 = 0
    e1 = v1 - p1
    if e1 == 1 or e1 == 2:
        has1 = True
        b1 = e1 - 1
        v = p1 + 1
    elif e1 > 2:
        v = v1 - 1
    else:
        v = v1
    if has1 and has2:
        return v, 2, b1, b2
    if has1:
        return v, 1, b1, 0
    if has2:
        return v, 1, b2, 0
    return v, 0, 0, 0


def _check_interior(plane, i: int, j: int, reach: str) -> np.ndarray:
    arr = np.asarray(plane)
    h, w = arr.shape
    if not (1 <= i <= h - 2 and 1 <= j <= w - 2):
        raise PositionError(f"({i}, {j}) is not an interior position of a {h}x{w} plane; the {reach} is incomplete")
    return arr


def predictor_pair(plane, i: int, j: int) -> tuple[int, int]:
    """DTLE predictor pair at 0-based interior position ``(i, j)``."""
    arr = _check_interior(plane, i, j, "8-neighbourhood")
    p1, p2 = dtle_predictors(arr.astype(np.int64), i, j)
    return int(p1), int(p2)


def tle_predictors_at(plane, i: int, j: int) -> tuple[int, int]:
    arr = _check_interior(plane, i, j, "4-neighbourhood")
    p1, p2 = tle_predictors(arr.astype(np.int64), i, j)
    return int(p1), int(p2)


def _bit_pair(bits) -> tuple[int, int]:
    it = iter(bits)
    first = next(it, 0)
    second = next(it, 0)
    return int(first), int(second)


def embed_pixel(v: int, p1: int, p2: int, bits=(), vmax: int = 63) -> tuple[int, int]:
    """Two-layer double-peak embedding of one HSB value.

    ``bits`` supplies the pending payload bits; missing ones are padded with 0.
    Returns the marked value and how many bits were consumed (0, 1 or 2).
    """
    a, b = _bit_pair(bits)
    v2, used = dtle_embed_rule(int(v), int(p1), int(p2), a, b)
    if not 0 <= v2 <= vmax:
        raise PixelOverflowError(f"value {v} marked to {v2}, outside [0, {vmax}]")
    return int(v2), int(used)


def extract_pixel(v2: int, p1: int, p2: int) -> tuple[int, tuple[int, ...]]:
    v, count, first, second = dtle_extract_rule(int(v2), int(p1), int(p2))
    return int(v), (int(first), int(second))[:count]


def tle_embed_pixel(v: int, p1: int, p2: int, bits=(), vmax: int = 31) -> tuple[int, int]:
    a, b = _bit_pair(bits)
    v2, used = tle_embed_rule(int(v), int(p1), int(p2), a, b)
    if not 0 <= v2 <= vmax:
        raise PixelOverflowError(f"value {v} marked to {v2}, outside [0, {vmax}]")
    return int(v2), int(used)


def tle_extract_pixel(v2: int, p1: int, p2: int) -> tuple[int, tuple[int, ...]]:
    v, count, first, second = tle_extract_rule(int(v2), int(p1), int(p2))
    return int(v), (int(first), int(second))[:count]
