"""Command-line front end: ``dtle {embed,extract,capacity,bench,compare}``.

Exit status: 0 success, 1 bad arguments or unreadable input, 2 insufficient
capacity, 3 corrupt or non-stego input, 4 benchmark finished with skipped images.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, codec
from .bits import pack_bits, random_bits, unpack_bits
from .errors import CorruptionError, DTLEError, InsufficientCapacity
from .image_io import load_pgm, save_pgm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAPACITY = 2
EXIT_CORRUPT = 3
EXIT_PARTIAL = 4

DEFAULT_N = {"dtle": 2, "tle": 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dtle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, med_choices=("on", "off", "auto"), med_default="auto"):
        p.add_argument("--in", dest="inp", required=True, metavar="PATH")
        p.add_argument("--n", type=int, choices=range(0, 8), default=None, metavar="{0..7}",
                       help="number of LSB planes left untouched (default 2 for dtle, 3 for tle)")
        p.add_argument("--med", choices=med_choices, default=med_default, required=med_default is None,
                       help="MED preprocessing; auto enables it when over 5%% of interior cells need marking")
        p.add_argument("--scheme", choices=("dtle", "tle"), default="dtle")
        p.add_argument("--seed", type=int, default=0, metavar="S")

    p = sub.add_parser("embed", help="hide a secret in a PGM image")
    common(p)
    p.add_argument("--out", required=True, metavar="PATH", help="stego PGM to write")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--secret", metavar="PATH", help="secret file, bit-packed MSB first")
    src.add_argument("--secret-random", type=_nonneg, metavar="N", help="use N pseudo-random bits from --seed")
    p.add_argument("--secret-bits", type=_nonneg, metavar="N", help="bits of --secret to use (default: whole file)")
    p.add_argument("--csv", metavar="PATH", help="also write the summary as a one-row CSV")

    p = sub.add_parser("extract", help="recover the secret and the original image")
    common(p, med_choices=("on", "off"), med_default=None)
    p.add_argument("--out", required=True, metavar="PATH", help="recovered PGM to write")
    p.add_argument("--secret", required=True, metavar="PATH", help="file receiving the bit-packed secret")

    p = sub.add_parser("capacity", help="largest secret the image accepts (seeded pseudo-random dry run)")
    common(p)

    p = sub.add_parser("bench", help="capacity/PSNR sweep over a directory of PGM images")
    p.add_argument("--in", dest="inp", required=True, metavar="DIR")
    p.add_argument("--out", metavar="PATH", help="per-image CSV (default stdout)")
    p.add_argument("--csv", metavar="PATH", help="success-percentage table per target EC")
    p.add_argument("--schemes", default="dtle,dtle-nomed,tle")
    p.add_argument("--targets", type=_int_list, default=[], help="comma-separated target EC values in bits")
    p.add_argument("--n", type=int, choices=range(0, 8), default=None, metavar="{0..7}")
    p.add_argument("--seed", type=int, default=0, metavar="S")

    p = sub.add_parser("compare", help="run every scheme on one image and print the results")
    p.add_argument("--in", dest="inp", required=True, metavar="PATH")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--schemes", default="dtle,dtle-nomed,tle")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    return parser


def _json_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (np.integer, np.bool_)):
        return v.item()
    return v


def _emit(payload: dict) -> None:
    print(json.dumps({k: _json_value(v) for k, v in payload.items()}, sort_keys=True))


def _cut(args) -> int:
    return DEFAULT_N[args.scheme] if args.n is None else args.n


def _use_med(args, cover, n: int) -> bool:
    if args.med == "auto":
        return codec.is_complex(cover, n)
    return args.med == "on"


def _secret(args) -> np.ndarray:
    if args.secret_bits is not None and args.secret is None:
        raise UsageError("--secret-bits needs --secret")
    if args.secret_random is not None:
        return random_bits(args.secret_random, args.seed)
    if args.secret is not None:
        data = Path(args.secret).read_bytes()
        try:
            return unpack_bits(data, args.secret_bits)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return np.zeros(0, dtype=np.uint8)


def cmd_embed(args) -> int:
    cover = load_pgm(args.inp)
    n = _cut(args)
    use_med = _use_med(args, cover, n)
    result = codec.embed(cover, _secret(args), n=n, use_med=use_med, scheme=args.scheme)
    save_pgm(args.out, result.stego)
    summary = result.summary()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(",".join(summary) + "\n")
            fh.write(",".join(str(_json_value(v)) for v in summary.values()) + "\n")
    _emit(summary)
    return EXIT_OK


def cmd_extract(args) -> int:
    stego = load_pgm(args.inp)
    n = _cut(args)
    secret, original = codec.extract(stego, n=n, use_med=args.med == "on", scheme=args.scheme)
    save_pgm(args.out, original)
    Path(args.secret).write_bytes(pack_bits(secret))
    _emit({"secret_bits": int(secret.size), "scheme": args.scheme, "n": n, "med": args.med})
    return EXIT_OK


def cmd_capacity(args) -> int:
    cover = load_pgm(args.inp)
    n = _cut(args)
    use_med = _use_med(args, cover, n)
    cap = codec.capacity(cover, n=n, use_med=use_med, scheme=args.scheme, seed=args.seed)
    _emit({**cap.summary(), "scheme": args.scheme, "n": n, "med": "on" if use_med else "off"})
    return EXIT_OK


def _variants(text: str) -> list[str]:
    names = [s.strip().lower() for s in text.split(",") if s.strip()]
    for name in names:
        try:
            bench.variant(name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return names


def cmd_bench(args) -> int:
    directory = Path(args.inp)
    if not directory.is_dir():
        raise UsageError(f"{directory} is not a directory")
    report = bench.bench(directory, _variants(args.schemes), args.targets, seed=args.seed, n=args.n)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            bench.write_rows(report.rows, fh)
    else:
        bench.write_rows(report.rows, sys.stdout)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            bench.write_spe(report.spe, fh)
    for name, reason in report.skipped:
        print(f"skipped {name}: {reason}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_PARTIAL


def cmd_compare(args) -> int:
    img = load_pgm(args.inp)
    rows = [bench.measure(img, Path(args.inp).stem, bench.variant(v), seed=args.seed)
            for v in _variants(args.schemes)]
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            bench.write_rows(rows, fh)
    out = []
    for r in rows:
        d = bench.result_dict(r)
        d.pop("runtime_ms")
        out.append({k: _json_value(v) for k, v in d.items()})
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


COMMANDS = {
    "embed": cmd_embed,
    "extract": cmd_extract,
    "capacity": cmd_capacity,
    "bench": cmd_bench,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InsufficientCapacity as exc:
        print(json.dumps({"error": "insufficient capacity", "needed": exc.needed, "available": exc.available}),
              file=sys.stderr)
        return EXIT_CAPACITY
    except CorruptionError as exc:
        print(f"dtle: corrupt or non-stego input: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except (UsageError, DTLEError, OSError) as exc:
        print(f"dtle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
