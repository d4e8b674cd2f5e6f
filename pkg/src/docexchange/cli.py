"""Command-line interface.

Bit strings on disk are packed most-significant-bit first; ``--bits`` gives the
exact length when it is not a multiple of 8. Exit codes: 0 success, 1 detected
reconstruction failure, 2 usage error or malformed input.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bits import pack_bits, random_bits, unpack_bits
from .ecc import ecc_decode, ecc_encode
from .harness import apply_edits, edit_distance, random_edit_script, run_bench, write_csv
from .sketch import DetectedFailure, Sketch, SketchFormatError, build_sketch, reconstruct


class InputError(Exception):
    pass


def _read_bits(path: str, nbits: Optional[int]) -> bytes:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if nbits is not None and not 0 <= nbits <= 8 * len(data):
        raise InputError(f"{path} holds {8 * len(data)} bits, fewer than --bits {nbits}")
    return unpack_bits(data, nbits)


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)


def _cmd_sketch(args) -> int:
    bits = _read_bits(args.inp, args.bits)
    _write(args.out, build_sketch(bits, args.k).to_bytes())
    return 0


def _cmd_reconstruct(args) -> int:
    bits = _read_bits(args.inp, args.bits)
    try:
        sketch = Sketch.from_bytes(Path(args.sketch).read_bytes())
    except OSError as exc:
        raise InputError(f"cannot read {args.sketch}: {exc.strerror}") from None
    except SketchFormatError as exc:
        raise InputError(f"malformed sketch {args.sketch}: {exc}") from None
    try:
        out = reconstruct(bits, sketch)
    except DetectedFailure as exc:
        _write(args.out, pack_bits(exc.best_effort))
        print("detected failure: more edits than the sketch budget", file=sys.stderr)
        return 1
    _write(args.out, pack_bits(out))
    return 0


def _cmd_ecc_encode(args) -> int:
    bits = _read_bits(args.inp, args.bits)
    word = ecc_encode(bits, args.k, override=args.override).bits
    _write(args.out, pack_bits(word))
    print(len(word))
    return 0


def _cmd_ecc_decode(args) -> int:
    bits = _read_bits(args.inp, args.bits)
    try:
        out = ecc_decode(bits, args.n, args.k, override=args.override)
    except DetectedFailure as exc:
        _write(args.out, pack_bits(exc.best_effort))
        print("detected failure: codeword damaged beyond the edit budget", file=sys.stderr)
        return 1
    _write(args.out, pack_bits(out))
    return 0


def _cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    t_a = random_bits(args.n, rng)
    t_b = apply_edits(t_a, random_edit_script(args.n, args.e, rng))
    _write(args.a, pack_bits(t_a))
    _write(args.b, pack_bits(t_b))
    print(len(t_a), len(t_b))
    return 0


def _cmd_verify(args) -> int:
    a = _read_bits(args.a, args.a_bits)
    b = _read_bits(args.b, args.b_bits)
    print(edit_distance(a, b))
    return 0


def _cmd_bench(args) -> int:
    ns = [1 << e for e in range(args.nmin, args.nmax + 1)]
    rows = run_bench(ns, args.ks, args.trials, args.seed)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    return 0 if all(r.success_count == r.trial_count for r in rows) else 1


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [_positive(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="docexchange", description="Deterministic document exchange and edit-error correction for bit strings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sketch", help="build the sender's sketch")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--bits", type=_nonneg)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sketch)

    p = sub.add_parser("reconstruct", help="recover the sender's string")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--bits", type=_nonneg)
    p.add_argument("--sketch", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("ecc-encode", help="encode a message against k edits; prints the codeword bit length")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--bits", type=_nonneg)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--override", action="store_true", help="allow k above n^(1/3)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ecc_encode)

    p = sub.add_parser("ecc-decode", help="decode a damaged codeword")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--bits", type=_nonneg, help="received codeword length in bits")
    p.add_argument("--n", type=_nonneg, required=True, help="message length in bits")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--override", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ecc_decode)

    p = sub.add_parser("gen", help="write a random string and a copy with e edits")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--e", type=_nonneg, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify", help="print the edit distance of two files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--a-bits", type=_nonneg)
    p.add_argument("--b-bits", type=_nonneg)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="size and timing table as CSV")
    p.add_argument("--nmin", type=_nonneg, default=10, help="log2 of the smallest n")
    p.add_argument("--nmax", type=_nonneg, default=16, help="log2 of the largest n")
    p.add_argument("--ks", type=_int_list, default=[1, 2, 4, 8, 16])
    p.add_argument("--trials", type=_positive, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"docexchange {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
