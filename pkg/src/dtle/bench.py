"""Benchmark sweep: maximum embedding capacity, fidelity and side-information size per image and scheme."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import astuple, dataclass, field, fields
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from . import codec
from .bits import random_bits
from .errors import DTLEError
from .image_io import load_pgm
from .metrics import ImageResult, embedding_rate, spe

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Variant:
    label: str
    scheme: str
    use_med: bool
    n: int


VARIANTS = {
    "dtle": Variant("DTLE", "dtle", True, 2),
    "dtle-nomed": Variant("DTLE-NoMED", "dtle", False, 2),
    "tle": Variant("TLE", "tle", False, 3),
}

CSV_COLUMNS = (
    "image", "scheme", "n", "use_med", "ec_bits", "er_bpp", "psnr_original_db",
    "psnr_cover_db", "aux_bits", "lclm_bits", "complex", "runtime_ms",
)
SPE_COLUMNS = ("scheme", "target_ec", "spe_percent", "images")
IMAGE_SUFFIXES = (".pgm", ".pnm")


def variant(name: str) -> Variant:
    try:
        return VARIANTS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; expected one of {sorted(VARIANTS)}") from None


def measure(img, image_id: str, var: Variant, seed: int = 0, n: int | None = None) -> ImageResult:
    """Embed the largest seeded random secret the image accepts and report the outcome.

    An image that cannot carry its own side information yields ``ec == 0`` and
    infinite PSNR, since the cover is left untouched.
    """
    cut = var.n if n is None else n
    start = time.perf_counter()
    cap = codec.capacity(img, n=cut, use_med=var.use_med, scheme=var.scheme, seed=seed)
    if cap.embeddable:
        res = codec.embed(img, random_bits(cap.max_secret_bits, seed), n=cut, use_med=var.use_med, scheme=var.scheme)
        ec, p_orig, p_cov, aux, l_clm = res.ec, res.psnr_original, res.psnr_cover, res.aux_bits, res.l_clm
    else:
        ec, p_orig, p_cov, aux, l_clm = 0, math.inf, math.inf, cap.overhead_bits, 0
    elapsed = (time.perf_counter() - start) * 1000.0
    return ImageResult(
        image=image_id,
        scheme=var.label,
        n=cut,
        use_med=var.use_med,
        ec=ec,
        er=embedding_rate(ec, int(np.asarray(img).size)),
        psnr_original=p_orig,
        psnr_cover=p_cov,
        aux_bits=aux,
        l_clm=l_clm,
        complex=codec.is_complex(img),
        runtime_ms=elapsed,
    )


@dataclass
class BenchReport:
    rows: list[ImageResult] = field(default_factory=list)
    spe: list[tuple[str, int, float, int]] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.skipped


def list_images(directory) -> list[Path]:
    root = Path(directory)
    return sorted((p for p in root.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
                  key=lambda p: p.name)


def spe_table(rows: Iterable[ImageResult], targets: Iterable[int]) -> list[tuple[str, int, float, int]]:
    by_scheme: dict[str, list[int]] = {}
    for r in rows:
        by_scheme.setdefault(r.scheme, []).append(r.ec)
    table = []
    for scheme in sorted(by_scheme):
        caps = by_scheme[scheme]
        for t in sorted(targets):
            table.append((scheme, int(t), spe(caps, t), len(caps)))
    return table


def bench(directory, schemes: Iterable[str] = ("dtle", "dtle-nomed", "tle"), targets: Iterable[int] = (),
          seed: int = 0, n: int | None = None) -> BenchReport:
    variants = [variant(s) for s in schemes]
    targets = list(targets)
    report = BenchReport()
    paths = list_images(directory)
    if not paths:
        log.warning("no PGM images found in %s", directory)
    for path in paths:
        try:
            img = load_pgm(path)
        except (OSError, DTLEError, ValueError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            report.skipped.append((path.name, str(exc)))
            continue
        for var in variants:
            try:
                report.rows.append(measure(img, path.stem, var, seed=seed, n=n))
            except DTLEError as exc:
                log.warning("skipping %s with %s: %s", path.name, var.label, exc)
                report.skipped.append((path.name, str(exc)))
    if report.rows:
        report.spe = spe_table(report.rows, targets)
    return report


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return "inf" if math.isinf(value) else f"{value:.4f}"
    return str(value)


def result_record(r: ImageResult) -> list[str]:
    return [
        r.image, r.scheme, _fmt(r.n), _fmt(r.use_med), _fmt(r.ec), f"{r.er:.6f}", _fmt(r.psnr_original),
        _fmt(r.psnr_cover), _fmt(r.aux_bits), _fmt(r.l_clm), _fmt(r.complex), f"{r.runtime_ms:.1f}",
    ]


def write_rows(rows: Iterable[ImageResult], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(result_record(r))


def write_spe(table, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SPE_COLUMNS)
    for scheme, target, pct, count in table:
        writer.writerow([scheme, target, f"{pct:.2f}", count])


def result_dict(r: ImageResult) -> dict:
    return {f.name: v for f, v in zip(fields(r), astuple(r))}
