"""Bit-sequence helpers. Bit streams are 1-D ``uint8`` arrays of 0/1, most significant bit first."""
from __future__ import annotations

import numpy as np

from .errors import CorruptionError


def as_bits(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    arr = np.asarray(bits, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ValueError("bit sequences may only contain 0 and 1")
    return arr.astype(np.uint8)


def int_to_bits(value: int, width: int) -> np.ndarray:
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def random_bits(count: int, seed: int) -> np.ndarray:
    """The deterministic secret stream used by ``--secret-random`` and capacity dry runs."""
    return np.random.default_rng(seed).integers(0, 2, size=count, dtype=np.uint8)


def pack_bits(bits) -> bytes:
    return np.packbits(as_bits(bits)).tobytes()


def unpack_bits(data: bytes, count: int | None = None) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if count is not None:
        if count > bits.size:
            raise ValueError(f"asked for {count} bits but only {bits.size} are available")
        bits = bits[:count]
    return bits


class BitReader:
    """Sequential reader over a bit array; running short means the data is corrupt."""

    def __init__(self, bits):
        self.bits = as_bits(bits)
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self.bits.size - self.pos

    def take(self, count: int) -> np.ndarray:
        if count < 0 or count > self.remaining:
            raise CorruptionError(f"bit stream ended: wanted {count} bits, {self.remaining} left")
        out = self.bits[self.pos : self.pos + count]
        self.pos += count
        return out

    def read_int(self, width: int) -> int:
        return bits_to_int(self.take(width))
