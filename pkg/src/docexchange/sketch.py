"""One-way document exchange under edit distance.

The sender cuts its (zero-padded) string into ``2k'`` pieces, then ``4k'``,
and so on down to pieces of ``max(32k', 2^ceil(log2 log2 n))`` bits, where
``k'`` is ``k`` rounded up to a power of two. Each piece gets a deterministic
signature: a short substring of it (or the piece itself when its period is at
most ``4k + 2``), that substring's period, and a deterministic sample of it.
The top level's signatures are sent as they are; every deeper level sends only
Reed-Solomon parity over its interleaved signatures, and the bottom level sends
parity over the piece contents.

The receiver matches each signature against the ``2k + 1`` alignments its own
string allows, rebuilds the next level's signatures from what it matched, and
lets the parity repair the at most ``2k`` that came out wrong. At the bottom it
copies matched contents and repairs those the same way.
"""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional, Union

import numpy as np

from .bits import BitsLike, as_bits, bit_width, bits_to_int, int_to_bits, pack_bits, unpack_bits
from .det_sample import (
    DetSample,
    PeriodicDetSample,
    build_det_sample,
    eliminate_candidates,
)
from .rs_codec import (
    SYMBOL_BITS,
    decode_streams,
    encode_streams,
    matrix_signatures,
    signature_matrix,
)
from .strings_core import LceIndex, find_high_period_window

MAGIC = b"DXS1"
VERSION = 1
FLAG_FALLBACK = 0x01

_HEADER = struct.Struct("<4sBBQIH")
_LEVEL = struct.Struct("<IIHI")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


class SketchFormatError(ValueError):
    """The bytes do not form a sketch consistent with its own header."""


class DetectedFailure(Exception):
    """Reed-Solomon decoding found errors it could not correct.

    The edit budget was exceeded (or the sketch was damaged); ``best_effort``
    holds the string assembled anyway.
    """

    def __init__(self, best_effort: bytes, stats: "ReconstructStats"):
        super().__init__("sketch parity could not correct the reconstruction")
        self.best_effort = best_effort
        self.stats = stats


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


@dataclass(frozen=True)
class Level:
    piece_count: int
    piece_len: int
    sig_width: int

    @property
    def streams(self) -> int:
        return -(-self.sig_width // SYMBOL_BITS)


@dataclass(frozen=True)
class LevelPlan:
    n: int
    k: int
    n_pad: int
    levels: tuple[Level, ...]

    @property
    def bottom_len(self) -> int:
        return self.levels[-1].piece_len

    @property
    def parity_len(self) -> int:
        """Parity symbols per protected stream."""
        return 4 * self.k


def bottom_piece_len(n_pad: int, k_pow: int) -> int:
    return max(32 * k_pow, 1 << _ceil_log2(max(1, n_pad.bit_length() - 1)))


def plan_levels(n: int, k: int) -> LevelPlan:
    """Level structure both sides derive from ``(n, k)``."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    k_pow = 1 << _ceil_log2(k)
    top = 32 * k_pow  # top-level piece length, a power of two
    while True:
        n_pad = 2 * k_pow * top
        if n_pad < n:
            top *= 2
            continue
        floor = bottom_piece_len(n_pad, k_pow)
        if floor > top:
            top = floor
            continue
        break
    levels = []
    count, length = 2 * k_pow, top
    while length >= floor:
        levels.append(Level(count, length, SignatureLayout.for_level(length, k).width))
        count, length = count * 2, length // 2
    return LevelPlan(n, k, n_pad, tuple(levels))


class Branch(enum.Enum):
    PERIODIC = 0  # piece period at most 4k + 2; the piece itself is sampled
    APERIODIC = 1  # a short non-periodic substring of the piece is sampled


@dataclass(frozen=True)
class PieceSignature:
    branch: Branch
    piece_len: int
    p_prime_offset: int
    p_prime_len: int
    p_prime_period: int
    sample: Union[DetSample, PeriodicDetSample]


@dataclass(frozen=True)
class SignatureLayout:
    """Fixed-width bit encoding of the signatures of one level."""

    piece_len: int
    k: int
    offset_bits: int
    len_bits: int
    shift_bits: int
    max_positions: int
    count_bits: int
    pos_bits: int

    @classmethod
    @lru_cache(maxsize=None)
    def for_level(cls, piece_len: int, k: int) -> "SignatureLayout":
        window = 12 * k + 6
        max_positions = _ceil_log2(window // 2 + 1)
        return cls(
            piece_len=piece_len,
            k=k,
            offset_bits=bit_width(piece_len - 1),
            len_bits=bit_width(piece_len),
            shift_bits=bit_width(window // 2),
            max_positions=max_positions,
            count_bits=bit_width(max_positions),
            pos_bits=bit_width(window - 1),
        )

    @property
    def width(self) -> int:
        return (
            1
            + self.offset_bits
            + 2 * self.len_bits
            + self.shift_bits
            + self.count_bits
            + self.max_positions * (self.pos_bits + 1)
        )

    @cached_property
    def _fields(self) -> list[int]:
        return (
            [1, self.offset_bits, self.len_bits, self.len_bits, self.shift_bits, self.count_bits]
            + [self.pos_bits] * self.max_positions
            + [1] * self.max_positions
        )

    def pack(self, sig: PieceSignature) -> bytes:
        sample = sig.sample
        shift = sample.shift if isinstance(sample, DetSample) else 0
        npos = len(sample.positions)
        if npos > self.max_positions:
            raise ValueError("sample larger than the layout allows")
        pad = [0] * (self.max_positions - npos)
        values = [sig.branch.value, sig.p_prime_offset, sig.p_prime_len, sig.p_prime_period, shift, npos]
        values += list(sample.positions) + pad + list(sample.values) + pad
        word = 0
        for width, v in zip(self._fields, values):
            if v >> width:
                raise ValueError(f"field value {v} does not fit in {width} bits")
            word = (word << width) | v
        return int_to_bits(word, self.width)

    def unpack(self, bits: bytes) -> Optional[PieceSignature]:
        """Decode a signature; None when the fields are inconsistent."""
        word = bits_to_int(bits)
        widths = self._fields
        fields = [0] * len(widths)
        for i in range(len(widths) - 1, -1, -1):
            fields[i] = word & ((1 << widths[i]) - 1)
            word >>= widths[i]
        branch, offset, length, period, shift, npos = fields[:6]
        if npos > self.max_positions:
            return None
        positions = tuple(fields[6 : 6 + npos])
        values = tuple(fields[6 + self.max_positions : 6 + self.max_positions + npos])
        B = self.piece_len
        if branch == Branch.PERIODIC.value:
            if offset or length != B or not 1 <= period <= 4 * self.k + 2:
                return None
            if any(q >= period for q in positions):
                return None
            sample = PeriodicDetSample(positions, values, period, B)
            return PieceSignature(Branch.PERIODIC, B, 0, B, period, sample)
        if not (1 <= length and offset + length <= B and 1 <= period <= length):
            return None
        if shift > length // 2 or any(q >= length for q in positions):
            return None
        sample = DetSample(positions, values, shift, length)
        return PieceSignature(Branch.APERIODIC, B, offset, length, period, sample)


@lru_cache(maxsize=1 << 16)
def _det_sample(p_prime: bytes) -> DetSample:
    return build_det_sample(p_prime)


def _fold_sample(piece: bytes, pi: int) -> PeriodicDetSample:
    inner = _det_sample(piece[: 2 * pi - 1])
    positions = tuple(sorted({q % pi for q in inner.positions}))
    return PeriodicDetSample(positions, tuple(piece[q] for q in positions), pi, len(piece))


def _first_periods(rows: np.ndarray, candidates: range) -> np.ndarray:
    """Per row, the smallest candidate that is a period of it (0 if none)."""
    found = np.zeros(rows.shape[0], dtype=np.int64)
    width = rows.shape[1]
    for pi in candidates:
        if pi >= width:
            found[found == 0] = width
            break
        open_ = found == 0
        if not open_.any():
            break
        hit = open_ & (rows[:, pi:] == rows[:, :-pi]).all(axis=1)
        found[hit] = pi
    return found


def build_signatures(pieces: np.ndarray, k: int) -> list[PieceSignature]:
    """Signatures of the rows of a ``count x B`` bit matrix.

    Periods up to ``4k + 2`` and the period of each piece's leftmost
    ``12k + 6``-bit window are found for all rows at once; a piece whose
    leftmost window is too periodic falls back to the runs-based search.
    """
    count, B = pieces.shape
    bound = 4 * k + 2
    window = 12 * k + 6
    if B < window:
        raise ValueError(f"piece length {B} below the {window}-bit minimum for k={k}")
    if count == 0:
        return []
    pieces = np.ascontiguousarray(pieces, dtype=np.uint8)
    small = _first_periods(pieces, range(1, bound + 1))
    heads = pieces[:, :window]
    head_small = _first_periods(heads, range(1, bound + 1))
    head_ok = (small == 0) & (head_small == 0)
    head_period = np.zeros(count, dtype=np.int64)
    if head_ok.any():
        head_period[head_ok] = _first_periods(heads[head_ok], range(bound + 1, window + 1))
    out = []
    for r in range(count):
        row = pieces[r].tobytes()
        if small[r]:
            pi = int(small[r])
            out.append(PieceSignature(Branch.PERIODIC, B, 0, B, pi, _fold_sample(row, pi)))
            continue
        if head_ok[r]:
            start, pi2 = 0, int(head_period[r])
        else:
            start, _ = find_high_period_window(row, bound)
            pi2 = int(_first_periods(pieces[r : r + 1, start : start + window], range(1, window + 1))[0])
        length = window if 2 * pi2 > window else 2 * pi2 - 1
        p_prime = row[start : start + length]
        out.append(PieceSignature(Branch.APERIODIC, B, start, length, pi2, _det_sample(p_prime)))
    return out


def build_signature(piece: BitsLike, k: int) -> PieceSignature:
    """Signature of a single piece of at least ``32k`` bits."""
    piece = as_bits(piece)
    if len(piece) < 32 * k:
        raise ValueError(f"piece of {len(piece)} bits is shorter than 32k = {32 * k}")
    arr = np.frombuffer(piece, dtype=np.uint8).reshape(1, -1)
    return build_signatures(arr, k)[0]


@dataclass
class LevelPayload:
    piece_count: int
    piece_len: int
    sig_width: int
    payload: bytes


@dataclass
class Sketch:
    n: int
    k: int
    levels: list[LevelPayload] = field(default_factory=list)
    bottom: bytes = b""
    raw: Optional[bytes] = None  # packed original string of a FALLBACK sketch

    @property
    def fallback(self) -> bool:
        return self.raw is not None

    def to_bytes(self) -> bytes:
        flags = FLAG_FALLBACK if self.fallback else 0
        out = [_HEADER.pack(MAGIC, VERSION, flags, self.n, self.k, len(self.levels))]
        if self.fallback:
            out += [_U64.pack(self.n), _U32.pack(len(self.raw)), self.raw]
            return b"".join(out)
        for lv in self.levels:
            out.append(_LEVEL.pack(lv.piece_count, lv.piece_len, lv.sig_width, len(lv.payload)))
            out.append(lv.payload)
        out += [_U32.pack(len(self.bottom)), self.bottom]
        return b"".join(out)

    @property
    def size_bits(self) -> int:
        return 8 * len(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "Sketch":
        try:
            return _parse(data)
        except struct.error as exc:
            raise SketchFormatError(f"truncated sketch: {exc}") from None


def _parse(data: bytes) -> Sketch:
    magic, version, flags, n, k, level_count = _HEADER.unpack_from(data, 0)
    pos = _HEADER.size
    if magic != MAGIC:
        raise SketchFormatError("bad magic")
    if version != VERSION:
        raise SketchFormatError(f"unsupported version {version}")
    if flags & ~FLAG_FALLBACK:
        raise SketchFormatError(f"unknown flags {flags:#x}")
    if flags & FLAG_FALLBACK:
        (nbits,) = _U64.unpack_from(data, pos)
        (size,) = _U32.unpack_from(data, pos + 8)
        raw = data[pos + 12 : pos + 12 + size]
        if nbits != n or size != -(-n // 8) or len(raw) != size or level_count:
            raise SketchFormatError("inconsistent fallback payload")
        return Sketch(n, k, raw=raw)
    if n < 1 or k < 1:
        raise SketchFormatError("n and k must be positive")
    plan = plan_levels(n, k)
    if level_count != len(plan.levels):
        raise SketchFormatError("level count does not match (n, k)")
    levels = []
    for i, lv in enumerate(plan.levels):
        count, length, width, size = _LEVEL.unpack_from(data, pos)
        pos += _LEVEL.size
        if (count, length, width) != (lv.piece_count, lv.piece_len, lv.sig_width):
            raise SketchFormatError(f"level {i} header does not match (n, k)")
        if size != _level_payload_len(plan, i) or pos + size > len(data):
            raise SketchFormatError(f"level {i} payload has the wrong size")
        levels.append(LevelPayload(count, length, width, data[pos : pos + size]))
        pos += size
    (size,) = _U32.unpack_from(data, pos)
    pos += 4
    if size != _bottom_payload_len(plan) or pos + size != len(data):
        raise SketchFormatError("bottom payload has the wrong size")
    return Sketch(n, k, levels, data[pos:])


def _level_payload_len(plan: LevelPlan, i: int) -> int:
    lv = plan.levels[i]
    if i == 0:
        return -(-lv.piece_count * lv.sig_width // 8)
    return lv.streams * plan.parity_len * 2


def _bottom_payload_len(plan: LevelPlan) -> int:
    return plan.bottom_len // SYMBOL_BITS * plan.parity_len * 2


def expected_sketch_bits(n: int, k: int) -> int:
    """Serialized size of ``build_sketch(t, k)`` for any ``t`` of ``n`` bits."""
    if n == 0:
        return 8 * (_HEADER.size + 12)
    full = _full_sketch_bits(plan_levels(n, k))
    return 8 * (_HEADER.size + 12 + -(-n // 8)) if full > n else full


def _symbols_to_bytes(symbols: np.ndarray) -> bytes:
    return np.ascontiguousarray(symbols, dtype="<u2").tobytes()


def _bytes_to_symbols(data: bytes, rows: int) -> np.ndarray:
    return np.frombuffer(data, dtype="<u2").astype(np.int64).reshape(rows, -1)


def _pieces(arr: np.ndarray, count: int, length: int) -> np.ndarray:
    return arr[: count * length].reshape(count, length)


def build_sketch(t_a: BitsLike, k: int) -> Sketch:
    """The single message the sender transmits for budget ``k`` edits."""
    bits = as_bits(t_a)
    n = len(bits)
    if k < 1:
        raise ValueError("k must be at least 1")
    if n == 0:
        return Sketch(0, k, raw=b"")
    plan = plan_levels(n, k)
    if _full_sketch_bits(plan) > n:
        return Sketch(n, k, raw=pack_bits(bits))
    arr = np.frombuffer(bits + bytes(plan.n_pad - n), dtype=np.uint8)
    levels = []
    for i, lv in enumerate(plan.levels):
        layout = SignatureLayout.for_level(lv.piece_len, k)
        sigs = [layout.pack(s) for s in build_signatures(_pieces(arr, lv.piece_count, lv.piece_len), k)]
        if i == 0:
            payload = pack_bits(b"".join(sigs))
        else:
            parity = encode_streams(signature_matrix(sigs, lv.sig_width).T, 2 * k)
            payload = _symbols_to_bytes(parity)
        levels.append(LevelPayload(lv.piece_count, lv.piece_len, lv.sig_width, payload))
    bottom = plan.levels[-1]
    contents = _pieces(arr, bottom.piece_count, bottom.piece_len)
    parity = encode_streams(_content_symbols(contents).T, 2 * k)
    return Sketch(n, k, levels, _symbols_to_bytes(parity))


def _full_sketch_bits(plan: LevelPlan) -> int:
    size = _HEADER.size + 4 + _bottom_payload_len(plan)
    size += sum(_LEVEL.size + _level_payload_len(plan, i) for i in range(len(plan.levels)))
    return 8 * size


def _content_symbols(contents: np.ndarray) -> np.ndarray:
    count, length = contents.shape
    weights = 1 << np.arange(SYMBOL_BITS - 1, -1, -1, dtype=np.int64)
    return contents.astype(np.int64).reshape(count, length // SYMBOL_BITS, SYMBOL_BITS) @ weights


def _symbols_content(symbols: np.ndarray) -> np.ndarray:
    shifts = np.arange(SYMBOL_BITS - 1, -1, -1, dtype=np.int64)
    return ((symbols[:, :, None] >> shifts) & 1).astype(np.uint8).reshape(symbols.shape[0], -1)


def match_piece(
    sig: PieceSignature,
    t_b: bytes,
    expected_start: int,
    k: int,
    lce: LceIndex,
) -> Optional[int]:
    """Start in ``t_b`` of the piece described by ``sig``, searched within ``k``
    of ``expected_start``; None when no alignment survives.

    If the piece occurs in the window the returned start holds it; otherwise the
    answer may be any alignment (a false positive the parity will repair).
    """
    B = sig.piece_len
    lo = max(0, expected_start - k)
    hi = min(expected_start + k, len(t_b) - B)
    if lo > hi:
        return None
    s, length, period = sig.p_prime_offset, sig.p_prime_len, sig.p_prime_period

    def period_ok(c: int) -> bool:
        return lce.has_period(c, c + length, period)

    hit = eliminate_candidates(sig.sample, t_b, range(lo + s, hi + s + 1), period_ok)
    return None if hit is None else hit - s


@dataclass
class ReconstructStats:
    """What the receiver saw, level by level."""

    unmatched: list[int] = field(default_factory=list)
    wrong_signatures: list[int] = field(default_factory=list)
    wrong_pieces: int = 0
    failed_streams: int = 0

    @property
    def detected_failure(self) -> bool:
        return self.failed_streams > 0


def reconstruct(t_b: BitsLike, sketch: Sketch, stats: Optional[ReconstructStats] = None) -> bytes:
    """Recover the sender's string from ``t_b`` and the sketch.

    Exact whenever ``t_b`` is within ``sketch.k`` edits of the sender's string.
    Raises :class:`DetectedFailure` when the parity reports uncorrectable
    errors, which can only happen when that promise is broken.
    """
    if stats is None:
        stats = ReconstructStats()
    if sketch.fallback:
        return unpack_bits(sketch.raw, sketch.n)
    k = sketch.k
    plan = plan_levels(sketch.n, k)
    text = as_bits(t_b) + bytes(plan.n_pad - sketch.n)
    lce = LceIndex(text)
    arr = np.frombuffer(text, dtype=np.uint8)

    first = plan.levels[0]
    layout = SignatureLayout.for_level(first.piece_len, k)
    raw = unpack_bits(sketch.levels[0].payload, first.piece_count * first.sig_width)
    w = first.sig_width
    sigs = [layout.unpack(raw[i * w : (i + 1) * w]) for i in range(first.piece_count)]

    for depth, lv in enumerate(plan.levels):
        B = lv.piece_len
        starts = [
            None if sig is None else match_piece(sig, text, i * B, k, lce)
            for i, sig in enumerate(sigs)
        ]
        stats.unmatched.append(sum(s is None for s in starts))
        matched = [i for i, s in enumerate(starts) if s is not None]
        spans = np.zeros((lv.piece_count, B), dtype=np.uint8)
        if matched:
            offsets = np.array([starts[i] for i in matched], dtype=np.int64)
            spans[matched] = arr[offsets[:, None] + np.arange(B)]
        if depth == len(plan.levels) - 1:
            symbols = _content_symbols(spans)
            parity = _bytes_to_symbols(sketch.bottom, symbols.shape[1])
            fixed, failed, _ = decode_streams(np.hstack([symbols.T, parity]), 2 * k)
            stats.failed_streams += int(failed.sum())
            stats.wrong_pieces = int((fixed.T != symbols).any(axis=1).sum())
            out = _symbols_content(fixed.T).tobytes()[: sketch.n]
            if stats.detected_failure:
                raise DetectedFailure(out, stats)
            return out

        child = plan.levels[depth + 1]
        child_layout = SignatureLayout.for_level(child.piece_len, k)
        halves = spans.reshape(2 * lv.piece_count, child.piece_len)
        live = np.repeat([s is not None for s in starts], 2)
        blocks = [bytes(child.sig_width)] * child.piece_count
        sigs = [None] * child.piece_count
        if live.any():
            idx = np.flatnonzero(live)
            for i, sig in zip(idx.tolist(), build_signatures(halves[idx], k)):
                blocks[i] = child_layout.pack(sig)
                sigs[i] = sig
        symbols = signature_matrix(blocks, child.sig_width)
        parity = _bytes_to_symbols(sketch.levels[depth + 1].payload, child.streams)
        fixed, failed, _ = decode_streams(np.hstack([symbols.T, parity]), 2 * k)
        stats.failed_streams += int(failed.sum())
        changed = np.flatnonzero((fixed.T != symbols).any(axis=1))
        stats.wrong_signatures.append(int(changed.size))
        if changed.size:
            repaired = matrix_signatures(np.ascontiguousarray(fixed.T[changed]), child.sig_width)
            for i, block in zip(changed.tolist(), repaired):
                sigs[i] = child_layout.unpack(block)
    raise AssertionError("unreachable")
