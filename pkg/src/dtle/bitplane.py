"""Split 8-bit pixels into a high (HSB) and low (LSB) plane at bit position ``n``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, RangeError, ShapeError
from .image_io import as_gray


@dataclass(frozen=True)
class PlanePair:
    hsb: np.ndarray  # values in [0, 2**(8 - n) - 1]
    lsb: np.ndarray  # values in [0, 2**n - 1]
    n: int

    @property
    def hsb_max(self) -> int:
        return (1 << (8 - self.n)) - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.hsb.shape


def check_cut(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or not 0 <= n <= 7:
        raise ParameterError(f"cut parameter n must be an integer in [0, 7], got {n!r}")
    return int(n)


def decompose(img, n: int) -> PlanePair:
    n = check_cut(n)
    pixels = as_gray(img)
    return PlanePair(hsb=pixels >> n, lsb=pixels & ((1 << n) - 1), n=n)


def recompose(planes: PlanePair) -> np.ndarray:
    n = check_cut(planes.n)
    hsb = np.asarray(planes.hsb)
    lsb = np.asarray(planes.lsb)
    if hsb.shape != lsb.shape or hsb.ndim != 2:
        raise ShapeError(f"plane shapes differ: {hsb.shape} vs {lsb.shape}")
    if hsb.size:
        if hsb.min() < 0 or hsb.max() > planes.hsb_max:
            raise RangeError(f"HSB values must lie in [0, {planes.hsb_max}]")
        if lsb.min() < 0 or lsb.max() >= (1 << n):
            raise RangeError(f"LSB values must lie in [0, {(1 << n) - 1}]")
    return ((hsb.astype(np.int64) << n) | lsb).astype(np.uint8)
