"""Adaptive order-0 arithmetic coder with 32-bit integer state.

Frequencies start at 1 per symbol, grow by 1 per coded symbol and are halved
(rounding up) once their total reaches 2**16. The encoder terminates by
emitting a single 1 bit; the decoder reads zeros past the end of the stream,
exactly as many as the encoder left implicit, so truncated or padded
streams are rejected.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .errors import CorruptionError

STATE_BITS = 32
FULL = 1 << STATE_BITS
HALF = FULL >> 1
QUARTER = HALF >> 1
MASK = FULL - 1
MAX_TOTAL = 1 << 16


@njit(cache=True)
def _rescale(freq):
    total = 0
    for s in range(freq.shape[0]):
        freq[s] = (freq[s] + 1) >> 1
        total += freq[s]
    return total


@njit(cache=True)
def _encode(symbols, n_symbols, out):
    freq = np.ones(n_symbols, dtype=np.int64)
    total = n_symbols
    low = 0
    high = MASK
    pending = 0
    nbits = 0
    for k in range(symbols.shape[0]):
        s = symbols[k]
        cum_lo = 0
        for t in range(s):
            cum_lo += freq[t]
        cum_hi = cum_lo + freq[s]
        span = high - low + 1
        high = low + span * cum_hi // total - 1
        low = low + span * cum_lo // total
        while True:
            if ((low ^ high) & HALF) == 0:
                bit = high >> (STATE_BITS - 1)
                out[nbits] = bit
                nbits += 1
                for _ in range(pending):
                    out[nbits] = bit ^ 1
                    nbits += 1
                pending = 0
                low = (low << 1) & MASK
                high = ((high << 1) & MASK) | 1
            elif (low & ~high & QUARTER) != 0:
                pending += 1
                low = (low << 1) ^ HALF
                high = ((high ^ HALF) << 1) | HALF | 1
            else:
                break
        freq[s] += 1
        total += 1
        if total >= MAX_TOTAL:
            total = _rescale(freq)
    out[nbits] = 1
    return nbits + 1


@njit(cache=True)
def _decode(bits, n_bits, count, n_symbols, out):
    # Returns 0 on success, 1 if the stream ran dry, 2 on an impossible code value,
    # 3 if bits were left over.
    freq = np.ones(n_symbols, dtype=np.int64)
    total = n_symbols
    low = 0
    high = MASK
    code = 0
    pos = 0
    past_end = 0
    pending = 0
    for _ in range(STATE_BITS):
        b = 0
        if pos < n_bits:
            b = bits[pos]
        else:
            past_end += 1
        pos += 1
        code = (code << 1) | b
    for k in range(count):
        span = high - low + 1
        value = ((code - low + 1) * total - 1) // span
        if value < 0 or value >= total:
            return 2
        s = 0
        cum_lo = 0
        while cum_lo + freq[s] <= value:
            cum_lo += freq[s]
            s += 1
        cum_hi = cum_lo + freq[s]
        out[k] = s
        high = low + span * cum_hi // total - 1
        low = low + span * cum_lo // total
        while True:
            if ((low ^ high) & HALF) == 0:
                pending = 0
                low = (low << 1) & MASK
                high = ((high << 1) & MASK) | 1
                b = 0
                if pos < n_bits:
                    b = bits[pos]
                else:
                    past_end += 1
                pos += 1
                code = ((code << 1) & MASK) | b
            elif (low & ~high & QUARTER) != 0:
                pending += 1
                low = (low << 1) ^ HALF
                high = ((high ^ HALF) << 1) | HALF | 1
                b = 0
                if pos < n_bits:
                    b = bits[pos]
                else:
                    past_end += 1
                pos += 1
                code = (code & HALF) | ((code << 1) & (MASK >> 1)) | b
            else:
                break
        freq[s] += 1
        total += 1
        if total >= MAX_TOTAL:
            total = _rescale(freq)
    # The decoder runs STATE_BITS bits ahead of the encoder, which ended with
    # `pending` unresolved bits and a single closing 1, so an intact stream is
    # overrun by exactly STATE_BITS - 1 + pending bits.
    expected = STATE_BITS - 1 + pending
    if past_end > expected:
        return 1
    if past_end < expected:
        return 3
    return 0


def encode(symbols, n_symbols: int = 3) -> np.ndarray:
    """Arithmetic-code a sequence of symbols in ``[0, n_symbols)``; returns the bit array."""
    seq = np.ascontiguousarray(np.asarray(symbols, dtype=np.int64).ravel())
    if seq.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if seq.min() < 0 or seq.max() >= n_symbols:
        raise ValueError(f"symbols must lie in [0, {n_symbols})")
    out = np.zeros(17 * seq.size + 2 * STATE_BITS, dtype=np.uint8)
    nbits = _encode(seq, n_symbols, out)
    return out[:nbits].copy()


def decode(bits, count: int, n_symbols: int = 3) -> np.ndarray:
    if count == 0:
        return np.zeros(0, dtype=np.uint8)
    arr = np.ascontiguousarray(np.asarray(bits, dtype=np.uint8).ravel())
    out = np.zeros(count, dtype=np.uint8)
    status = _decode(arr, arr.size, count, n_symbols, out)
    if status == 1:
        raise CorruptionError(f"arithmetic-coded stream of {arr.size} bits exhausted before {count} symbols")
    if status == 2:
        raise CorruptionError("arithmetic-coded stream holds an impossible code value")
    if status == 3:
        raise CorruptionError(f"arithmetic-coded stream of {arr.size} bits is longer than {count} symbols need")
    return out
