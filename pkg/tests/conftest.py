from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from dtle import load_pgm

DATA_DIR = Path(__file__).parent / "data"
STANDARD_IMAGES = ("lena", "baboon", "barbara", "boat")
BUNDLED_IMAGES = tuple(sorted(p.stem for p in DATA_DIR.glob("*.pgm")))

# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def images() -> dict[str, np.ndarray]:
    return {name: load_pgm(DATA_DIR / f"{name}.pgm") for name in BUNDLED_IMAGES}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def smooth_image(rng, h: int, w: int, lo: int = 40, hi: int = 215, noise: int = 3) -> np.ndarray:
    """Bilinear blow-up of a coarse random grid plus a little noise."""
    coarse = rng.integers(lo, hi, size=(h // 4 + 2, w // 4 + 2)).astype(np.float64)
    ys = np.linspace(0, coarse.shape[0] - 1, h)
    xs = np.linspace(0, coarse.shape[1] - 1, w)
    y0 = np.floor(ys).astype(int).clip(0, coarse.shape[0] - 2)
    x0 = np.floor(xs).astype(int).clip(0, coarse.shape[1] - 2)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    top = coarse[y0][:, x0] * (1 - fx) + coarse[y0][:, x0 + 1] * fx
    bot = coarse[y0 + 1][:, x0] * (1 - fx) + coarse[y0 + 1][:, x0 + 1] * fx
    img = top * (1 - fy) + bot * fy + rng.integers(-noise, noise + 1, size=(h, w))
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)
