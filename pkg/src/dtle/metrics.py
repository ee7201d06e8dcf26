"""Embedding capacity, rate, image fidelity and success-percentage metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB for 8-bit images; ``inf`` when identical."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ShapeError(f"cannot compare images of shape {x.shape} and {y.shape}")
    mse = float(np.mean((x - y) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def embedding_rate(ec: int, pixels: int) -> float:
    if pixels <= 0:
        raise ValueError("pixel count must be positive")
    return ec / pixels


def spe(capacities, target_ec: int) -> float:
    """Percentage of images whose capacity reaches ``target_ec``."""
    caps = np.asarray(list(capacities))
    if caps.size == 0:
        raise ValueError("SPE needs at least one result")
    return 100.0 * np.count_nonzero(caps >= target_ec) / caps.size


@dataclass(frozen=True)
class ImageResult:
    image: str
    scheme: str  # "DTLE", "DTLE-NoMED" or "TLE"
    n: int
    use_med: bool
    ec: int
    er: float
    psnr_original: float
    psnr_cover: float
    aux_bits: int
    l_clm: int
    complex: bool
    runtime_ms: float
