"""Overflow-prevention location map on the HSB plane.

Interior cells within ``margin`` of either end of ``[0, M]`` are pulled inward
to ``margin`` or ``M - margin`` so that embedding can move them by up to
``margin`` without leaving the plane range. The per-cell symbol records how
far each one was moved: symbol ``s`` at the low end means the original value
was ``s - 1``; at the high end, ``M - (s - 1)``. Symbol 0 marks untouched cells.
Border cells are never shifted.

DTLE uses ``margin=2`` (symbols 0/1/2); TLE uses ``margin=1`` (symbols 0/1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arith
from .errors import CorruptionError, ParameterError, ShapeError


def _plane_max(n: int) -> int:
    return (1 << (8 - n)) - 1


def _check(vmax: int, margin: int) -> None:
    if margin not in (1, 2):
        raise ParameterError(f"margin must be 1 or 2, got {margin}")
    if vmax < 2 * margin:
        raise ParameterError(f"plane range [0, {vmax}] is too narrow for a margin of {margin}")


def interior(raster: np.ndarray) -> np.ndarray:
    return raster[1:-1, 1:-1]


def build_and_shift(hsb, n: int, margin: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(shifted plane, location map)``; the map has the plane's shape, zero on borders."""
    vmax = _plane_max(n)
    _check(vmax, margin)
    plane = np.array(hsb, dtype=np.int64)
    if plane.ndim != 2:
        raise ShapeError(f"expected a 2-D plane, got shape {plane.shape}")
    lm = np.zeros(plane.shape, dtype=np.uint8)
    inner = interior(plane)
    inner_lm = interior(lm)
    low = inner < margin
    high = inner > vmax - margin
    inner_lm[low] = inner[low] + 1
    inner_lm[high] = vmax - inner[high] + 1
    inner[low] = margin
    inner[high] = vmax - margin
    return plane, lm


def restore(shifted, lm, n: int, margin: int = 2) -> np.ndarray:
    vmax = _plane_max(n)
    _check(vmax, margin)
    plane = np.array(shifted, dtype=np.int64)
    lm = np.asarray(lm)
    if lm.shape != plane.shape:
        raise ShapeError(f"location map {lm.shape} does not match plane {plane.shape}")
    if lm.size and lm.max() > margin:
        raise CorruptionError(f"location map symbol {int(lm.max())} exceeds margin {margin}")
    if np.any(lm[0, :]) or np.any(lm[-1, :]) or np.any(lm[:, 0]) or np.any(lm[:, -1]):
        raise CorruptionError("location map marks a border cell")
    inner = interior(plane)
    inner_lm = interior(lm).astype(np.int64)
    marked = inner_lm > 0
    at_low = inner == margin
    at_high = inner == vmax - margin
    if np.any(marked & ~(at_low | at_high)):
        raise CorruptionError("marked cell holds a value the pre-shift cannot produce")
    if np.any(~marked & ((inner < margin) | (inner > vmax - margin))):
        raise CorruptionError("unmarked interior cell lies inside the overflow margin")
    lo = marked & at_low
    hi = marked & at_high
    inner[lo] = inner_lm[lo] - 1
    inner[hi] = vmax - inner_lm[hi] + 1
    return plane


def marked_fraction(hsb, n: int, margin: int = 2) -> float:
    """Share of interior cells the location map has to mark."""
    inner = interior(np.asarray(hsb))
    if inner.size == 0:
        return 0.0
    vmax = _plane_max(n)
    return float(np.count_nonzero((inner < margin) | (inner > vmax - margin)) / inner.size)


@dataclass(frozen=True)
class CompressedMap:
    bits: np.ndarray
    cell_count: int

    @property
    def bit_length(self) -> int:
        return int(self.bits.size)


def compress(lm, n_symbols: int = 3) -> CompressedMap:
    """Arithmetic-code the symbol sequence of ``lm`` (row-major, every cell given)."""
    symbols = np.asarray(lm).ravel()
    return CompressedMap(bits=arith.encode(symbols, n_symbols), cell_count=int(symbols.size))


def decompress(bits, cell_count: int, height: int | None = None, width: int | None = None,
               n_symbols: int = 3) -> np.ndarray:
    symbols = arith.decode(bits, cell_count, n_symbols)
    if height is not None and width is not None:
        if height * width != cell_count:
            raise ShapeError(f"{cell_count} cells cannot fill a {height}x{width} map")
        return symbols.reshape(height, width)
    return symbols
