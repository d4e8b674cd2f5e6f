"""Deterministic samples: a few pattern positions whose agreement with a text
window rules out pattern occurrences at nearby offsets.

Sample positions are 0-based offsets into the pattern.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .strings_core import shortest_period


@dataclass(frozen=True)
class DetSample:
    """Sample of a non-periodic pattern.

    If a text window agrees with the pattern at ``positions``, the pattern does
    not occur at any relative offset in ``[-shift, -1]`` or
    ``[1, pattern_len // 2 - shift]``.
    """

    positions: tuple[int, ...]
    values: tuple[int, ...]
    shift: int
    pattern_len: int

    def forbidden_offsets(self) -> range:
        """Offsets ruled out around an agreeing window (0 is included, skip it)."""
        return range(-self.shift, self.pattern_len // 2 - self.shift + 1)


@dataclass(frozen=True)
class PeriodicDetSample:
    """Sample of a pattern with shortest period ``period``; positions lie in ``[0, period)``.

    A text window with period ``period`` agreeing at ``positions`` is not an
    occurrence shifted by 1..period-1 from the pattern.
    """

    positions: tuple[int, ...]
    values: tuple[int, ...]
    period: int
    pattern_len: int


Sample = Union[DetSample, PeriodicDetSample]


def check_sample(p: Sequence, positions: Iterable[int], shift: int) -> bool:
    """Whether ``(positions, shift)`` is a valid deterministic sample of ``p``.

    Every offset ``d`` in ``[-shift, -1] + [1, m // 2 - shift]`` must be blocked
    by some sampled position ``q`` with ``p[q] != p[q - d]``.
    """
    m = len(p)
    if not 0 <= shift <= m // 2:
        raise ValueError(f"shift {shift} out of range for length {m}")
    pos = list(positions)
    if any(not 0 <= q < m for q in pos):
        raise ValueError("sample position out of range")
    for d in range(-shift, m // 2 - shift + 1):
        if d == 0:
            continue
        if not any(0 <= q - d < m and p[q] != p[q - d] for q in pos):
            return False
    return True


def _first_mismatch(p: Sequence, gap: int) -> int:
    """Smallest ``i`` with ``p[i] != p[i + gap]``."""
    m = len(p)
    for i in range(m - gap):
        if p[i] != p[i + gap]:
            return i
    raise ValueError("pattern is periodic")


def build_det_sample(p: Sequence) -> DetSample:
    """Sample of a non-periodic pattern by halving aligned copies of it.

    Copies of ``p`` sit at offsets ``0..m // 2``. While more than one survives,
    take the first text column where the outermost survivors disagree, split the
    survivors by their symbol there and keep the smaller side (ties keep the
    side holding the smallest offset). The last survivor's offset is the shift;
    the split columns, relative to that copy, are the sample.
    """
    m = len(p)
    if m == 0:
        raise ValueError("empty pattern")
    if 2 * shortest_period(p) <= m:
        raise ValueError("pattern is periodic")
    survivors = list(range(m // 2 + 1))
    columns = []
    while len(survivors) > 1:
        lo, hi = survivors[0], survivors[-1]
        # copies at lo and hi disagree inside their overlap, which every survivor covers
        col = hi + _first_mismatch(p, hi - lo)
        ones = [a for a in survivors if p[col - a]]
        zeros = [a for a in survivors if not p[col - a]]
        if len(ones) < len(zeros) or (len(ones) == len(zeros) and ones[0] < zeros[0]):
            survivors = ones
        else:
            survivors = zeros
        columns.append(col)
    shift = survivors[0]
    positions = tuple(sorted(c - shift for c in columns))
    return DetSample(positions, tuple(p[q] for q in positions), shift, m)


def build_periodic_det_sample(p: Sequence, pi: int) -> PeriodicDetSample:
    """Sample for a pattern whose shortest period is ``pi <= len(p) / 3``.

    Built from the non-periodic prefix of length ``2 * pi - 1`` with positions
    folded modulo the period.
    """
    m = len(p)
    if not 1 <= pi or 3 * pi > m:
        raise ValueError(f"period {pi} must satisfy 1 <= pi <= |p|/3")
    if shortest_period(p) != pi:
        raise ValueError(f"{pi} is not the shortest period of p")
    inner = build_det_sample(p[: 2 * pi - 1])
    positions = tuple(sorted({q % pi for q in inner.positions}))
    return PeriodicDetSample(positions, tuple(p[q] for q in positions), pi, m)


def separates_rotations(p: Sequence, positions: Iterable[int], pi: int) -> bool:
    """Whether the positions tell ``p[:pi]`` apart from each nontrivial rotation."""
    pos = list(positions)
    return all(any(p[q] != p[(q - d) % pi] for q in pos) for d in range(1, pi))


def agrees(sample: Sample, text: Sequence, start: int) -> bool:
    """Whether ``text`` aligned at ``start`` carries the sampled values."""
    return all(text[start + q] == v for q, v in zip(sample.positions, sample.values))


def eliminate_candidates(
    sample: Sample,
    text: Sequence,
    starts: Sequence[int],
    period_ok: Optional[Callable[[int], bool]] = None,
) -> Optional[int]:
    """Reduce candidate alignments of a sampled pattern to at most one.

    ``starts`` are ascending pattern start positions in ``text``, each leaving
    room for the whole pattern. ``period_ok(start)`` tells whether the aligned
    substring has the stored period.

    For a non-periodic sample every agreeing candidate rules out the others in
    its forbidden range; over a window narrower than half the forbidden span
    this leaves at most one survivor, and a true occurrence is never ruled out.
    For a periodic sample the leftmost candidate passing both checks is taken:
    when an occurrence exists in the window that candidate's substring equals it.
    Returns None when nothing survives.
    """
    if period_ok is None:
        period_ok = _always
    if isinstance(sample, PeriodicDetSample):
        for c in starts:
            if period_ok(c) and agrees(sample, text, c):
                return c
        return None
    agreeing = [c for c in starts if agrees(sample, text, c)]
    lo_off = -sample.shift
    hi_off = sample.pattern_len // 2 - sample.shift
    for c in agreeing:
        ruled_out = any(
            other != c and lo_off <= c - other <= hi_off for other in agreeing
        )
        if not ruled_out and period_ok(c):
            return c
    return None


def _always(_: int) -> bool:
    return True
