"""Two-layer prediction-error expansion on the HSB plane: full embed / extract pipeline.

Embedding walks the interior of the HSB plane in four chessboard phases
(blue cells on odd rows, blue on even rows, white on odd rows, white on even
rows; a cell is blue when its 1-indexed ``i + j`` is even). No two cells of a
phase are 8-neighbours, so each phase sees the earlier phases in their marked
state and the later ones untouched, and the exact reverse walk reproduces every
predictor.

The payload is ``secret | displaced border LSBs | compressed location map |
MED side data``. A small header (last processed scan index, map length,
secret length, overflow-record count) replaces the leading LSB bits of the
border cells, whose originals travel in the payload.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit

from . import locmap
from .bitplane import PlanePair, check_cut, decompose, recompose
from .bits import BitReader, as_bits, int_to_bits, random_bits
from .errors import (
    CorruptionError,
    HeaderSpaceError,
    InsufficientCapacity,
    ParameterError,
    PixelOverflowError,
    ShapeError,
)
from .image_io import as_gray
from .med import AuxInfo, med_forward, med_inverse
from .metrics import psnr
from .pixel import (
    DTLE,
    TLE,
    dtle_embed_rule,
    dtle_extract_rule,
    dtle_predictors,
    tle_embed_rule,
    tle_extract_rule,
    tle_predictors,
)

SCHEMES = {"dtle": DTLE, "tle": TLE}
# How far a rule can move an HSB value, hence the location-map margin it needs.
_MARGIN = {DTLE: 2, TLE: 1}
COMPLEX_THRESHOLD = 0.05


# ---------------------------------------------------------------- scan order


@lru_cache(maxsize=64)
def _scan_order(h: int, w: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    i, j = np.mgrid[2:h, 2:w]  # 1-indexed interior
    i = i.ravel()
    j = j.ravel()
    blue = (i + j) % 2 == 0
    odd = i % 2 == 1
    phase = np.where(blue, np.where(odd, 0, 1), np.where(odd, 2, 3))
    order = np.argsort(phase, kind="stable")
    rows = np.ascontiguousarray(i[order] - 1, dtype=np.int64)
    cols = np.ascontiguousarray(j[order] - 1, dtype=np.int64)
    labels = phase[order].astype(np.int8)
    for arr in (rows, cols, labels):
        arr.setflags(write=False)
    return rows, cols, labels


PHASE_NAMES = ("blue-odd", "blue-even", "white-odd", "white-even")


def scan_order(h: int, w: int) -> list[tuple[int, int, str]]:
    """Interior positions in embedding order as 1-indexed ``(i, j, phase)``."""
    rows, cols, labels = _scan_order(h, w)
    return [(int(r) + 1, int(c) + 1, PHASE_NAMES[p]) for r, c, p in zip(rows, cols, labels)]


# ------------------------------------------------------------ header & border


@dataclass(frozen=True)
class HeaderLayout:
    """Field widths of the border header; they depend only on the image size."""

    k_end: int
    l_clm: int
    l_s: int
    n_over: int

    @property
    def width(self) -> int:
        return self.k_end + self.l_clm + self.l_s + self.n_over

    @classmethod
    def for_shape(cls, h: int, w: int) -> HeaderLayout:
        scan_len = max(h - 2, 0) * max(w - 2, 0)
        slot_bits = (2 * scan_len).bit_length()
        return cls(
            k_end=scan_len.bit_length(),
            l_clm=slot_bits,
            l_s=slot_bits,
            n_over=((h - 1) * (w - 1)).bit_length(),
        )


@dataclass(frozen=True)
class StegoHeader:
    k_end: int
    l_clm: int
    l_s: int
    n_over: int

    def to_bits(self, layout: HeaderLayout) -> np.ndarray:
        return np.concatenate([
            int_to_bits(self.k_end, layout.k_end),
            int_to_bits(self.l_clm, layout.l_clm),
            int_to_bits(self.l_s, layout.l_s),
            int_to_bits(self.n_over, layout.n_over),
        ])

    @classmethod
    def from_bits(cls, bits, layout: HeaderLayout) -> StegoHeader:
        reader = BitReader(bits)
        return cls(
            k_end=reader.read_int(layout.k_end),
            l_clm=reader.read_int(layout.l_clm),
            l_s=reader.read_int(layout.l_s),
            n_over=reader.read_int(layout.n_over),
        )


@lru_cache(maxsize=64)
def _border_cells(h: int, w: int) -> tuple[np.ndarray, np.ndarray]:
    """Row 1 left to right, row h, then columns 1 and w top to bottom (corners once)."""
    rows = [np.zeros(w, int), np.full(w, h - 1)]
    cols = [np.arange(w), np.arange(w)]
    if h > 2:
        rows += [np.arange(1, h - 1), np.arange(1, h - 1)]
        cols += [np.zeros(h - 2, int), np.full(h - 2, w - 1)]
    return np.concatenate(rows), np.concatenate(cols)


def _border_bits(lsb: np.ndarray, n: int) -> np.ndarray:
    r, c = _border_cells(*lsb.shape)
    vals = lsb[r, c].astype(np.int64)
    shifts = np.arange(n - 1, -1, -1)
    return ((vals[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def _write_border_bits(lsb: np.ndarray, n: int, prefix: np.ndarray) -> np.ndarray:
    r, c = _border_cells(*lsb.shape)
    bits = _border_bits(lsb, n)
    bits[: prefix.size] = prefix
    weights = 1 << np.arange(n - 1, -1, -1)
    out = lsb.copy()
    out[r, c] = (bits.reshape(-1, n) * weights).sum(axis=1)
    return out


# ------------------------------------------------------------------- kernels


@njit(cache=True)
def _record(trace, k, plane, i, j, rule):
    if rule == 0:
        z = np.empty(8, dtype=np.int64)
        m = 0
        for di in range(-1, 2):
            for dj in range(-1, 2):
                if di != 0 or dj != 0:
                    z[m] = plane[i + di, j + dj]
                    m += 1
    else:
        z = np.full(8, -1, dtype=np.int64)
        z[0] = plane[i - 1, j]
        z[1] = plane[i + 1, j]
        z[2] = plane[i, j - 1]
        z[3] = plane[i, j + 1]
    z.sort()
    for m in range(8):
        trace[k, m] = z[m]


@njit(cache=True)
def _embed_walk(plane, rows, cols, payload, rule, vmax, trace):
    """Embed ``payload`` along the scan; returns (processed count, bits consumed, status)."""
    n_bits = payload.shape[0]
    n_pos = rows.shape[0]
    record = trace.shape[0] > 0
    pos = 0
    k = 0
    while k < n_pos and pos < n_bits:
        i = rows[k]
        j = cols[k]
        if record:
            _record(trace, k, plane, i, j, rule)
        a = np.int64(payload[pos])
        b = np.int64(0)
        if pos + 1 < n_bits:
            b = np.int64(payload[pos + 1])
        v = np.int64(plane[i, j])
        if rule == 0:
            p1, p2 = dtle_predictors(plane, i, j)
            v2, used = dtle_embed_rule(v, p1, p2, a, b)
        else:
            p1, p2 = tle_predictors(plane, i, j)
            v2, used = tle_embed_rule(v, p1, p2, a, b)
        if v2 < 0 or v2 > vmax:
            return k, pos, 1
        plane[i, j] = v2
        pos += used
        k += 1
    return k, pos, 0


@njit(cache=True)
def _extract_walk(plane, rows, cols, k_end, rule, out, trace):
    """Undo the first ``k_end`` scan positions in reverse; bits land in ``out`` reversed."""
    record = trace.shape[0] > 0
    m = 0
    last_used = 0
    for k in range(k_end - 1, -1, -1):
        i = rows[k]
        j = cols[k]
        if record:
            _record(trace, k, plane, i, j, rule)
        v2 = np.int64(plane[i, j])
        if rule == 0:
            p1, p2 = dtle_predictors(plane, i, j)
            v, count, first, second = dtle_extract_rule(v2, p1, p2)
        else:
            p1, p2 = tle_predictors(plane, i, j)
            v, count, first, second = tle_extract_rule(v2, p1, p2)
        plane[i, j] = v
        if count == 2:
            out[m] = second
            out[m + 1] = first
        elif count == 1:
            out[m] = first
        m += count
        if k == k_end - 1:
            last_used = count
    return m, last_used


_NO_TRACE = np.zeros((0, 8), dtype=np.int64)


# ------------------------------------------------------------------ pipeline


def _rule(scheme: str) -> int:
    try:
        return SCHEMES[scheme.lower()]
    except (KeyError, AttributeError):
        raise ParameterError(f"unknown scheme {scheme!r}; expected one of {sorted(SCHEMES)}") from None


def _check_cut_for(n: int, rule: int) -> int:
    n = check_cut(n)
    margin = _MARGIN[rule]
    if n < 1 or (1 << (8 - n)) - 1 < 2 * margin:
        lo, hi = 1, 8 - (2 * margin + 1).bit_length()
        raise ParameterError(f"this scheme needs n in [{lo}, {hi}] (an LSB plane and a wide enough HSB plane), got {n}")
    return n


@dataclass
class _Prepared:
    """Everything derived from the cover before the embedding walk."""

    cover: np.ndarray
    domain: np.ndarray  # MED difference image, or the cover itself
    aux: AuxInfo | None
    planes: PlanePair
    shifted: np.ndarray
    lm: np.ndarray
    clm: np.ndarray
    layout: HeaderLayout
    border_bits: np.ndarray
    aux_bits: np.ndarray
    rule: int
    n: int
    use_med: bool
    marked: float = 0.0
    rows: np.ndarray = field(default=None, repr=False)
    cols: np.ndarray = field(default=None, repr=False)

    @property
    def vmax(self) -> int:
        return self.planes.hsb_max

    @property
    def overhead_bits(self) -> int:
        return self.layout.width + self.clm.size + self.aux_bits.size

    @property
    def header_fits(self) -> bool:
        return self.layout.width <= self.border_bits.size

    def overhead(self) -> np.ndarray:
        return np.concatenate([self.border_bits[: self.layout.width], self.clm, self.aux_bits])


def _compress_map(lm: np.ndarray, margin: int) -> np.ndarray:
    inner = locmap.interior(lm)
    if not inner.any():
        # An empty code marks a map with no marked cells.
        return np.zeros(0, dtype=np.uint8)
    return locmap.compress(inner, n_symbols=margin + 1).bits


def _prepare(cover, n: int, use_med: bool, rule: int) -> _Prepared:
    cover = as_gray(cover)
    h, w = cover.shape
    if h < 3 or w < 3:
        raise ShapeError(f"cover must be at least 3x3, got {h}x{w}")
    n = _check_cut_for(n, rule)
    if use_med:
        domain, aux = med_forward(cover)
        aux_bits = aux.to_bits()
    else:
        domain, aux = cover, None
        aux_bits = np.zeros(0, dtype=np.uint8)
    planes = decompose(domain, n)
    margin = _MARGIN[rule]
    shifted, lm = locmap.build_and_shift(planes.hsb, n, margin)
    rows, cols, _ = _scan_order(h, w)
    return _Prepared(
        cover=cover,
        domain=domain,
        aux=aux,
        planes=planes,
        shifted=shifted,
        lm=lm,
        clm=_compress_map(lm, margin),
        layout=HeaderLayout.for_shape(h, w),
        border_bits=_border_bits(planes.lsb, n),
        aux_bits=aux_bits,
        rule=rule,
        n=n,
        use_med=bool(use_med),
        marked=float(np.count_nonzero(locmap.interior(lm)) / max(rows.size, 1)),
        rows=rows,
        cols=cols,
    )


def _walk(prep: _Prepared, payload: np.ndarray, trace=None):
    plane = prep.shifted.copy()
    trace = _NO_TRACE if trace is None else trace
    k_end, used, status = _embed_walk(plane, prep.rows, prep.cols, payload, prep.rule, prep.vmax, trace)
    if status:
        i, j = prep.rows[k_end] + 1, prep.cols[k_end] + 1
        raise PixelOverflowError(f"embedding left the HSB range at ({i}, {j})")
    return plane, int(k_end), int(used)


@dataclass(frozen=True)
class StegoResult:
    stego: np.ndarray
    ec: int  # secret bits embedded
    slots_used: int  # payload bits plus any padding bit
    psnr_original: float
    psnr_cover: float
    header: StegoHeader
    payload_bits: int
    aux_bits: int  # compressed location map plus MED side data
    use_med: bool
    n: int
    scheme: str

    @property
    def k_end(self) -> int:
        return self.header.k_end

    @property
    def l_clm(self) -> int:
        return self.header.l_clm

    def summary(self) -> dict:
        return {
            "scheme": self.scheme,
            "n": self.n,
            "med": "on" if self.use_med else "off",
            "ec": self.ec,
            "psnr_original": self.psnr_original,
            "psnr_cover": self.psnr_cover,
            "k_end": self.k_end,
            "l_clm": self.l_clm,
            "n_over": self.header.n_over,
            "payload_bits": self.payload_bits,
            "slots_used": self.slots_used,
            "aux_bits": self.aux_bits,
        }


def _embed_prepared(prep: _Prepared, secret: np.ndarray, scheme: str, trace=None) -> StegoResult:
    if not prep.header_fits:
        raise HeaderSpaceError(
            f"header needs {prep.layout.width} bits but the border LSBs hold only {prep.border_bits.size}"
        )
    payload = np.concatenate([secret, prep.overhead()])
    plane, k_end, used = _walk(prep, payload, trace)
    if used < payload.size:
        raise InsufficientCapacity(needed=int(payload.size), available=used)
    header = StegoHeader(
        k_end=k_end,
        l_clm=int(prep.clm.size),
        l_s=int(secret.size),
        n_over=len(prep.aux.overflow_records) if prep.aux is not None else 0,
    )
    lsb = _write_border_bits(prep.planes.lsb, prep.n, header.to_bits(prep.layout))
    stego = recompose(PlanePair(hsb=plane, lsb=lsb, n=prep.n))
    return StegoResult(
        stego=stego,
        ec=int(secret.size),
        slots_used=used,
        psnr_original=psnr(prep.cover, stego),
        psnr_cover=psnr(prep.domain, stego),
        header=header,
        payload_bits=int(payload.size),
        aux_bits=int(prep.clm.size + prep.aux_bits.size),
        use_med=prep.use_med,
        n=prep.n,
        scheme=scheme.lower(),
    )


def embed(cover, secret, *, n: int = 2, use_med: bool = True, scheme: str = "dtle") -> StegoResult:
    """Hide ``secret`` (a 0/1 sequence) in ``cover``; raises :class:`InsufficientCapacity` if it does not fit."""
    rule = _rule(scheme)
    prep = _prepare(cover, n, use_med, rule)
    return _embed_prepared(prep, as_bits(secret), scheme)


def extract(stego, *, n: int = 2, use_med: bool = True, scheme: str = "dtle",
            verify: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Recover ``(secret, original)`` from a stego image made with the same parameters.

    With ``verify`` the result is re-embedded and must reproduce ``stego``
    exactly, so a tampered image or wrong parameters raise
    :class:`CorruptionError` instead of returning a wrong answer.
    """
    return _extract(stego, n, use_med, scheme, verify, _NO_TRACE)


def _extract(stego, n: int, use_med: bool, scheme: str, verify: bool, trace: np.ndarray):
    rule = _rule(scheme)
    stego = as_gray(stego)
    h, w = stego.shape
    if h < 3 or w < 3:
        raise ShapeError(f"stego image must be at least 3x3, got {h}x{w}")
    n = _check_cut_for(n, rule)
    margin = _MARGIN[rule]
    planes = decompose(stego, n)
    layout = HeaderLayout.for_shape(h, w)
    border = _border_bits(planes.lsb, n)
    if layout.width > border.size:
        raise CorruptionError("image border is too small to hold a header")
    header = StegoHeader.from_bits(border[: layout.width], layout)
    rows, cols, _ = _scan_order(h, w)
    if not use_med and header.n_over:
        raise CorruptionError(f"header lists {header.n_over} MED overflow records but MED is off")
    aux_len = 9 + 40 * header.n_over if use_med else 0
    total = header.l_s + layout.width + header.l_clm + aux_len
    if not 1 <= header.k_end <= rows.size:
        raise CorruptionError(f"last processed index {header.k_end} outside [1, {rows.size}]")
    if total > 2 * header.k_end:
        raise CorruptionError(f"header claims {total} payload bits in {header.k_end} pixels")

    plane = planes.hsb.astype(np.int64)
    out = np.zeros(2 * header.k_end, dtype=np.uint8)
    if trace.shape[0]:
        trace = trace[: header.k_end]
    got, last_used = _extract_walk(plane, rows, cols, header.k_end, rule, out, trace)
    collected = out[:got][::-1]
    # The walk stops right after the pixel that consumed the final payload bit;
    # at most one zero padding bit may follow it.
    if not (got - last_used < total <= got) or got - total > 1 or collected[total:].any():
        raise CorruptionError(f"recovered {got} bits do not frame a {total}-bit payload")

    reader = BitReader(collected[:total])
    secret = reader.take(header.l_s).copy()
    border_orig = reader.take(layout.width)
    clm = reader.take(header.l_clm)
    aux_bits = reader.take(aux_len)

    lsb = _write_border_bits(planes.lsb, n, border_orig)
    lm = np.zeros((h, w), dtype=np.uint8)
    if header.l_clm:
        inner = locmap.decompress(clm, (h - 2) * (w - 2), h - 2, w - 2, n_symbols=margin + 1)
        if not inner.any():
            raise CorruptionError("compressed location map decodes to an empty map")
        locmap.interior(lm)[:] = inner
    hsb = locmap.restore(plane, lm, n, margin)
    if hsb.min() < 0 or hsb.max() > planes.hsb_max:
        raise CorruptionError("recovered HSB plane leaves its range")
    original = recompose(PlanePair(hsb=hsb, lsb=lsb, n=n))
    if use_med:
        original = med_inverse(original, AuxInfo.from_bits(aux_bits, header.n_over))

    if verify:
        try:
            again = embed(original, secret, n=n, use_med=use_med, scheme=scheme)
        except (InsufficientCapacity, PixelOverflowError, HeaderSpaceError) as exc:
            raise CorruptionError(f"recovered data does not re-embed: {exc}") from exc
        if not np.array_equal(again.stego, stego):
            raise CorruptionError("recovered data does not reproduce the stego image")
    return secret, original


def context_traces(cover, secret, *, n: int = 2, use_med: bool = True,
                   scheme: str = "dtle") -> tuple[np.ndarray, np.ndarray]:
    """Sorted neighbourhood seen at each processed scan position, at embed and at extract time.

    Both arrays have one row per processed position (``k_end`` rows, 8 columns);
    4-neighbour schemes pad with -1. Reversibility requires them to be equal.
    """
    rule = _rule(scheme)
    prep = _prepare(cover, n, use_med, rule)
    size = prep.rows.size
    at_embed = np.full((size, 8), -2, dtype=np.int64)
    result = _embed_prepared(prep, as_bits(secret), scheme, at_embed)
    at_extract = np.full((size, 8), -2, dtype=np.int64)
    _extract(result.stego, n, use_med, scheme, False, at_extract)
    return at_embed[: result.k_end], at_extract[: result.k_end]


# ------------------------------------------------------------------ capacity


@dataclass(frozen=True)
class Capacity:
    max_secret_bits: int
    overhead_bits: int
    slot_count: int
    embeddable: bool
    seed: int = 0

    def summary(self) -> dict:
        return {
            "max_secret_bits": self.max_secret_bits,
            "overhead_bits": self.overhead_bits,
            "slot_count": self.slot_count,
            "embeddable": self.embeddable,
            "seed": self.seed,
        }


def _capacity_prepared(prep: _Prepared, seed: int = 0) -> Capacity:
    stream = random_bits(2 * prep.rows.size + 2, seed)
    _, _, slots = _walk(prep, stream)
    overhead = prep.overhead_bits
    if not prep.header_fits:
        return Capacity(0, overhead, slots, False, seed)
    tail = prep.overhead()
    _, _, used = _walk(prep, tail)
    if used < tail.size:
        # Not even the side information alone fits.
        return Capacity(0, overhead, slots, False, seed)
    # Slot counts depend on the bits themselves, so confirm the estimate with the
    # real payload layout and back off by the shortfall until it fits.
    size = max(slots - overhead, 0)
    for _ in range(64):
        payload = np.concatenate([stream[:size], tail])
        _, _, used = _walk(prep, payload)
        if used >= payload.size:
            return Capacity(size, overhead, slots, True, seed)
        if size == 0:
            break
        size = max(size - max(int(payload.size) - used, 1), 0)
    return Capacity(0, overhead, slots, False, seed)


def capacity(cover, *, n: int = 2, use_med: bool = True, scheme: str = "dtle", seed: int = 0) -> Capacity:
    """Largest secret (as the seeded stream ``random_bits(k, seed)``) the cover accepts.

    ``slot_count`` is the number of bit slots the whole scan offers to a
    pseudo-random payload; ``max_secret_bits`` is confirmed by an actual
    embedding of ``random_bits(max_secret_bits, seed)``. The empty secret is
    confirmed too, so ``embeddable`` means side information alone fits.
    Because slots depend on the payload bits, other secrets of the same
    length are not guaranteed to fit.
    """
    rule = _rule(scheme)
    cover = as_gray(cover)
    if cover.shape[0] < 3 or cover.shape[1] < 3:
        return Capacity(0, 0, 0, False, seed)
    return _capacity_prepared(_prepare(cover, n, use_med, rule), seed)


# --------------------------------------------------------------- diagnostics


def marked_fraction(cover, n: int = 2) -> float:
    """Share of interior HSB cells of the untransformed cover needing a location-map mark."""
    planes = decompose(cover, n)
    return locmap.marked_fraction(planes.hsb, n, margin=2)


def compressed_map_length(cover, *, n: int = 2, use_med: bool = True, scheme: str = "dtle") -> int:
    """Length in bits of the arithmetic-coded location map the embedding would carry."""
    return int(_prepare(cover, n, use_med, _rule(scheme)).clm.size)


def is_complex(cover, n: int = 2) -> bool:
    return marked_fraction(cover, n) > COMPLEX_THRESHOLD


def predictor_pairs(plane) -> tuple[np.ndarray, np.ndarray]:
    """DTLE predictor pair for every interior cell of an unmarked plane (vectorised)."""
    arr = np.asarray(plane, dtype=np.int64)
    h, w = arr.shape
    neigh = np.stack(
        [arr[1 + di : h - 1 + di, 1 + dj : w - 1 + dj] for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj],
        axis=-1,
    )
    neigh.sort(axis=-1)
    total = neigh.sum(axis=-1)
    return (total - neigh[..., 6] - neigh[..., 7]) // 6, (total - neigh[..., 0] - neigh[..., 1]) // 6
