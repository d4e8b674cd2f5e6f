"""Error-correcting code for adversarial insertions, deletions and substitutions.

A codeword is the message followed by its sketch, each sketch bit repeated
``2k + 1`` times. The decoder reads the first ``n`` bits as a damaged copy of
the message, recovers the sketch by block majority and runs the receiver.

The sketch is built for ``2k`` edits, not ``k``: with ``j`` net insertions in
the message part, the first ``n`` received bits lose the last ``j`` message
bits, so they can be ``k + j <= 2k`` edits away from the message.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import BitsLike, as_bits, pack_bits, unpack_bits
from .sketch import DetectedFailure, Sketch, SketchFormatError, build_sketch, expected_sketch_bits, reconstruct


def max_k(n: int) -> int:
    """Largest ``k`` with ``k^3 <= n``."""
    k = max(0, round(n ** (1 / 3)))
    while k**3 > n:
        k -= 1
    while (k + 1) ** 3 <= n:
        k += 1
    return k


def _check_k(n: int, k: int, override: bool) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    if not override and k > max_k(n):
        raise ValueError(f"k={k} exceeds floor(n^(1/3)) = {max_k(n)} for n={n}; pass override=True to force")


def sketch_budget(k: int) -> int:
    return 2 * k


def redundancy_bits(n: int, k: int, override: bool = False) -> int:
    """Length ``m`` of the protected tail for messages of ``n`` bits."""
    _check_k(n, k, override)
    return expected_sketch_bits(n, sketch_budget(k)) * (2 * k + 1)


def repeat_bits(bits: BitsLike, times: int) -> bytes:
    arr = np.frombuffer(as_bits(bits), dtype=np.uint8)
    return np.repeat(arr, times).tobytes()


def majority_decode(bits: BitsLike, count: int, block: int) -> bytes:
    """``count`` majority bits of consecutive ``block``-bit blocks.

    The input is zero-padded to ``count * block`` bits; the last block takes
    everything left over. Ties (possible only in an even-length last block)
    give 1.
    """
    if count == 0:
        return b""
    arr = np.frombuffer(as_bits(bits), dtype=np.uint8)
    need = count * block
    if arr.size < need:
        arr = np.concatenate((arr, np.zeros(need - arr.size, dtype=np.uint8)))
    head = arr[: (count - 1) * block].reshape(count - 1, block).sum(axis=1, dtype=np.int64)
    last = arr[(count - 1) * block :]
    out = np.empty(count, dtype=np.uint8)
    out[:-1] = 2 * head > block
    out[-1] = 2 * int(last.sum()) >= last.size
    return out.tobytes()


@dataclass(frozen=True)
class EditCodeword:
    payload: bytes
    protected: bytes

    @property
    def bits(self) -> bytes:
        return self.payload + self.protected

    def __len__(self) -> int:
        return len(self.payload) + len(self.protected)


def ecc_encode(s: BitsLike, k: int, override: bool = False) -> EditCodeword:
    """Codeword of ``s`` correcting any ``k`` edits."""
    bits = as_bits(s)
    _check_k(len(bits), k, override)
    sketch_bits = unpack_bits(build_sketch(bits, sketch_budget(k)).to_bytes())
    return EditCodeword(bits, repeat_bits(sketch_bits, 2 * k + 1))


def ecc_decode(received: BitsLike, n: int, k: int, override: bool = False) -> bytes:
    """Message of ``n`` bits from a codeword damaged by at most ``k`` edits.

    Raises :class:`DetectedFailure` (carrying a best-effort guess) when the
    recovered sketch does not parse or its parity cannot be satisfied.
    """
    bits = as_bits(received)
    m = redundancy_bits(n, k, override)
    if abs(len(bits) - (n + m)) > k:
        raise ValueError(f"received {len(bits)} bits, expected {n + m} +- {k}")
    head, tail = bits[:n], bits[n:]
    r = m // (2 * k + 1)
    sketch_bits = majority_decode(tail, r, 2 * k + 1)
    try:
        sketch = Sketch.from_bytes(pack_bits(sketch_bits))
    except SketchFormatError:
        raise DetectedFailure(head + bytes(n - len(head)), None) from None
    if sketch.n != n or sketch.k != sketch_budget(k):
        raise DetectedFailure(head + bytes(n - len(head)), None)
    return reconstruct(head, sketch)
