"""Test-pair generation, edit-distance oracles and the benchmark harness."""
from __future__ import annotations

import csv
import random
import time
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from .bits import random_bits
from .sketch import build_sketch, reconstruct

SUB, INS, DEL = "sub", "ins", "del"


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Levenshtein distance with unit costs, by the full DP table.

    Rows are vectorized: the insertion chain along a row is a running minimum
    of ``cand[i] - i`` shifted back by ``j``.
    """
    if len(a) < len(b):
        a, b = b, a
    m = len(b)
    if m == 0:
        return len(a)
    bv = np.frombuffer(b, dtype=np.uint8) if isinstance(b, bytes) else np.array([ord(c) for c in b] if isinstance(b, str) else list(b))
    idx = np.arange(m + 1)
    row = idx.copy()
    for i, ca in enumerate(a, start=1):
        ca = ord(ca) if isinstance(ca, str) else ca
        cand = np.empty(m + 1, dtype=np.int64)
        cand[0] = i
        cand[1:] = np.minimum(row[:-1] + (bv != ca), row[1:] + 1)
        row = np.minimum.accumulate(cand - idx) + idx
    return int(row[-1])


def _common_prefix(a: bytes, i: int, b: bytes, j: int) -> int:
    """Length of the common prefix of ``a[i:]`` and ``b[j:]`` by galloping slices."""
    limit = min(len(a) - i, len(b) - j)
    done, step = 0, 32
    while done < limit:
        size = min(step, limit - done)
        if a[i + done : i + done + size] == b[j + done : j + done + size]:
            done += size
            step *= 2
            continue
        while size > 1:
            half = size // 2
            if a[i + done : i + done + half] == b[j + done : j + done + half]:
                done += half
                size -= half
            else:
                size = half
        return done
    return done


def edit_distance_within(a: bytes, b: bytes, bound: int) -> Optional[int]:
    """Exact edit distance if it is at most ``bound``, else None.

    Diagonal-transition search: for each edit count ``e`` keep, per diagonal,
    the furthest row reachable with ``e`` edits, extending along exact matches.
    O((bound^2) log n) slice comparisons.
    """
    la, lb = len(a), len(b)
    if abs(la - lb) > bound:
        return None
    target = lb - la
    far = {0: _common_prefix(a, 0, b, 0)}
    if target == 0 and far[0] >= la:
        return 0
    for e in range(1, bound + 1):
        nxt = {}
        for d in range(-e, e + 1):
            best = -1
            if d in far:
                best = far[d] + 1
            if d - 1 in far:
                best = max(best, far[d - 1])
            if d + 1 in far:
                best = max(best, far[d + 1] + 1)
            if best < 0:
                continue
            row = min(best, la, lb - d)
            if row < 0 or row + d < 0:
                continue
            row += _common_prefix(a, row, b, row + d)
            nxt[d] = row
        far = nxt
        if far.get(target, -1) >= la:
            return e
    return None


def apply_edits(s: bytes, script: Iterable[tuple]) -> bytes:
    """Apply ``(op, pos[, bit])`` edits in order; substitutions flip the bit."""
    out = bytearray(s)
    for edit in script:
        op, pos = edit[0], edit[1]
        if op == SUB:
            out[pos] ^= 1
        elif op == DEL:
            del out[pos]
        elif op == INS:
            out.insert(pos, edit[2])
        else:
            raise ValueError(f"unknown edit {op!r}")
    return bytes(out)


def random_edit_script(length: int, e: int, rng: random.Random, span: Optional[tuple[int, int]] = None) -> list[tuple]:
    """``e`` random edits for a string of ``length`` bits, optionally confined to
    positions in ``span = (lo, hi)``."""
    script = []
    for _ in range(e):
        lo, hi = span if span else (0, length)
        hi = min(hi, length)
        op = rng.choice((SUB, INS, DEL)) if length else INS
        if op == INS:
            script.append((INS, rng.randint(lo, max(lo, hi)), rng.randrange(2)))
            length += 1
        else:
            if hi <= lo:
                script.append((INS, lo, rng.randrange(2)))
                length += 1
                continue
            script.append((op, rng.randrange(lo, hi)))
            if op == DEL:
                length -= 1
    return script


def apply_random_edits(s: bytes, e: int, seed: int) -> bytes:
    """Exactly ``e`` seeded edits; the result is within distance ``e`` of ``s``."""
    return apply_edits(s, random_edit_script(len(s), e, random.Random(seed)))


@dataclass
class BenchRecord:
    n: int
    k: int
    sketch_bits: int
    ecc_redundancy_bits: int
    encode_ms: float
    decode_ms: float
    trial_count: int
    success_count: int


def bench_pair(n: int, k: int, trials: int, seed: int) -> BenchRecord:
    from .ecc import redundancy_bits

    rng = random.Random(f"{seed}:{n}:{k}")
    enc = dec = 0.0
    ok = 0
    size = 0
    for _ in range(trials):
        t_a = random_bits(n, rng)
        t_b = apply_edits(t_a, random_edit_script(n, rng.randint(0, k), rng))
        t0 = time.perf_counter()
        sk = build_sketch(t_a, k)
        t1 = time.perf_counter()
        out = reconstruct(t_b, sk)
        t2 = time.perf_counter()
        enc += t1 - t0
        dec += t2 - t1
        size = sk.size_bits
        ok += out == t_a
    try:
        ecc_bits = redundancy_bits(n, k)
    except ValueError:
        ecc_bits = -1
    return BenchRecord(n, k, size, ecc_bits, 1e3 * enc / trials, 1e3 * dec / trials, trials, ok)


def run_bench(ns: Sequence[int], ks: Sequence[int], trials: int, seed: int) -> list[BenchRecord]:
    rows = [bench_pair(n, k, trials, seed) for n in ns for k in ks]
    rows.sort(key=lambda r: (r.n, r.k))
    return rows


def write_csv(rows: Sequence[BenchRecord], out: TextIO) -> None:
    writer = csv.writer(out)
    writer.writerow([f.name for f in fields(BenchRecord)])
    for r in rows:
        d = asdict(r)
        d["encode_ms"] = f"{r.encode_ms:.3f}"
        d["decode_ms"] = f"{r.decode_ms:.3f}"
        writer.writerow(d.values())
