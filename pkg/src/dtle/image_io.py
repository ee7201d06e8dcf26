"""Binary PGM (P5, maxval 255) reading and writing.

Images are plain 2-D ``uint8`` numpy arrays indexed ``[row, column]``.
"""
from __future__ import annotations

import os

import numpy as np

from .errors import ParseError, ShapeError

_WHITESPACE = b" \t\n\r\v\f"


def as_gray(img, min_size: int = 1) -> np.ndarray:
    """Validate ``img`` as an 8-bit grayscale raster and return it as a uint8 array."""
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D raster, got shape {arr.shape}")
    if arr.shape[0] < min_size or arr.shape[1] < min_size:
        raise ShapeError(f"raster {arr.shape} is smaller than {min_size}x{min_size}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ShapeError("pixel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def _next_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    # Skips whitespace and '#' comments; returns (token, token_start, end).
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            eol = data.find(b"\n", pos)
            pos = n if eol < 0 else eol + 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int, int]:
    token, start, end = _next_token(data, pos)
    if not token:
        raise ParseError(f"missing {what}", start)
    if not token.isdigit():
        raise ParseError(f"invalid {what} {token[:16]!r}", start)
    return int(token), start, end


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a binary P5 PGM with maxval 255."""
    data = bytes(data)
    if data[:2] != b"P5":
        raise ParseError(f"bad magic {data[:2]!r}, expected b'P5'", 0)
    width, w_at, pos = _header_int(data, 2, "width")
    height, h_at, pos = _header_int(data, pos, "height")
    maxval, m_at, pos = _header_int(data, pos, "maxval")
    if width == 0 or height == 0:
        raise ParseError(f"degenerate dimensions {width}x{height}", w_at if width == 0 else h_at)
    if maxval != 255:
        raise ParseError(f"unsupported maxval {maxval}, only 255 is accepted", m_at)
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise ParseError("missing whitespace after maxval", pos)
    pos += 1
    size = width * height
    if len(data) - pos < size:
        raise ParseError(f"truncated raster: need {size} bytes, have {len(data) - pos}", len(data))
    raster = np.frombuffer(data, dtype=np.uint8, count=size, offset=pos)
    return raster.reshape(height, width).copy()


def write_pgm(img) -> bytes:
    arr = as_gray(img)
    h, w = arr.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(arr).tobytes()


def load_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path: str | os.PathLike, img) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))
