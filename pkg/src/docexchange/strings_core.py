"""Periodicity primitives on strings.

Positions are 0-based and ranges half-open throughout: ``(start, stop)`` names
``s[start:stop]``. Functions accept any sliceable sequence (``bytes`` bit
strings, ``str``), so small hand-written examples can use letters.
"""
from __future__ import annotations

import heapq
from typing import NamedTuple, Optional, Sequence

import numpy as np

#: Marker for a window whose shortest period exceeds half its length.
APERIODIC = None


class Run(NamedTuple):
    """Maximal periodic substring ``t[start:stop]`` with shortest period ``period``."""

    start: int
    stop: int
    period: int


def shortest_period(s: Sequence) -> int:
    """Shortest period of ``s`` via the KMP failure function, O(|s|)."""
    n = len(s)
    if n == 0:
        raise ValueError("shortest_period of an empty string")
    fail = [0] * n
    k = 0
    for i in range(1, n):
        c = s[i]
        while k and s[k] != c:
            k = fail[k - 1]
        if s[k] == c:
            k += 1
        fail[i] = k
    return n - fail[-1]


def has_period(s: Sequence, pi: int) -> bool:
    """True iff ``s[i] == s[i - pi]`` for every valid ``i`` (not necessarily shortest)."""
    if not 1 <= pi <= len(s):
        raise ValueError(f"period {pi} out of range for length {len(s)}")
    return s[pi:] == s[: len(s) - pi]


def small_period(s: Sequence, bound: int) -> Optional[int]:
    """Shortest period of ``s`` if it is at most ``bound``, else None."""
    n = len(s)
    for pi in range(1, min(bound, n) + 1):
        if s[pi:] == s[: n - pi]:
            return pi
    return None


def _codes(t: Sequence) -> np.ndarray:
    if isinstance(t, (bytes, bytearray)):
        return np.frombuffer(bytes(t), dtype=np.uint8).astype(np.int64)
    if isinstance(t, str):
        return np.fromiter((ord(c) for c in t), dtype=np.int64, count=len(t))
    return np.asarray(t, dtype=np.int64)


def compute_runs(t: Sequence, max_period: Optional[int] = None) -> list[Run]:
    """All runs of ``t``, sorted by start.

    For each candidate period the maximal stretches where ``t[x] == t[x + p]``
    are found with vectorized passes over blocks of periods; a stretch of at
    least ``p`` matches is a run unless a smaller period already produced the
    same interval. That costs O(n * P) element comparisons for P candidate
    periods, so O(n^2) when every period is considered. ``max_period``
    restricts the output to runs whose period is at most that value.
    """
    n = len(t)
    top = n // 2 if max_period is None else min(max_period, n // 2)
    if top < 1:
        return []
    a = _codes(t)
    # codes are non-negative, so the padding (one above the largest code) never matches
    fill = int(a.max()) + 1
    a = a.astype(np.uint8 if fill < 256 else np.int64)
    padded = np.concatenate((a, np.full(top, fill, dtype=a.dtype)))
    shifted = np.lib.stride_tricks.sliding_window_view(padded, n)
    block = max(1, min(top, (1 << 21) // (n + 2)))
    seen: set[tuple[int, int]] = set()
    runs = []
    for p0 in range(1, top + 1, block):
        ps = np.arange(p0, min(top, p0 + block - 1) + 1)
        rows = np.zeros((ps.size, n + 2), dtype=np.int8)
        rows[:, 1 : n + 1] = a[None, :] == shifted[ps]
        edges = np.diff(rows.ravel())
        # every row opens and closes with a zero, so rises and falls pair up in order
        rise = np.flatnonzero(edges == 1) + 1
        fall = np.flatnonzero(edges == -1) + 1
        row = rise // (n + 2)
        x0 = rise - row * (n + 2) - 1
        x1 = fall - row * (n + 2) - 1
        period = ps[row]
        long = x1 - x0 >= period
        for s, e, p in zip(x0[long].tolist(), x1[long].tolist(), period[long].tolist()):
            span = (s, e + p)
            if span not in seen:
                seen.add(span)
                runs.append(Run(s, e + p, p))
    runs.sort()
    return runs


def periods_of_length_m(t: Sequence, m: int) -> list[Optional[int]]:
    """Shortest period of every length-``m`` window of ``t``, or APERIODIC.

    Entry ``i`` describes ``t[i:i + m]``: its shortest period when that is at
    most ``m // 2``, otherwise APERIODIC. Runs are swept left to right keeping
    the ones that cover the current window in a heap keyed by period.
    """
    n = len(t)
    if not 1 <= m <= n:
        raise ValueError(f"window length {m} out of range for length {n}")
    runs = [r for r in compute_runs(t, m // 2) if r.stop - r.start >= m]
    out: list[Optional[int]] = []
    heap: list[tuple[int, int]] = []
    nxt = 0
    for i in range(n - m + 1):
        while nxt < len(runs) and runs[nxt].start <= i:
            heapq.heappush(heap, (runs[nxt].period, runs[nxt].stop))
            nxt += 1
        # a run stops covering once its stop falls behind the window end
        while heap and heap[0][1] < i + m:
            heapq.heappop(heap)
        out.append(heap[0][0] if heap else APERIODIC)
    return out


class LceIndex:
    """Longest-common-extension queries on a fixed string.

    Suffix array by prefix doubling, LCP by binary lifting over the doubling
    ranks, then a sparse table for range minima. Construction is
    O(n log^2 n) vectorized work; each query is O(1).
    """

    def __init__(self, t: Sequence):
        n = len(t)
        if n == 0:
            raise ValueError("cannot index an empty string")
        self.text = t
        self.n = n
        codes = _codes(t)
        rank = np.unique(codes, return_inverse=True)[1].astype(np.int64)
        ranks = [rank]
        h = 1
        while int(rank.max()) < n - 1 and h < n:
            second = np.zeros(n, dtype=np.int64)
            second[: n - h] = rank[h:] + 1
            key = rank * (n + 1) + second
            order = np.argsort(key)
            sk = key[order]
            new = np.empty(n, dtype=np.int64)
            new[order] = np.concatenate(([0], np.cumsum(sk[1:] != sk[:-1])))
            rank = new
            ranks.append(rank)
            h *= 2
        sa = np.argsort(rank, kind="stable")
        self.rank = rank
        self._rank_list = rank.tolist()

        # lcp[r] = lce of suffixes sa[r] and sa[r + 1]
        x, y = sa[1:], sa[:-1]
        lcp = np.zeros(n - 1, dtype=np.int64)
        for level in range(len(ranks) - 1, -1, -1):
            step = 1 << level
            px, py = x + lcp, y + lcp
            ok = (px < n) & (py < n)
            rl = ranks[level]
            same = ok & (rl[np.minimum(px, n - 1)] == rl[np.minimum(py, n - 1)])
            lcp += same * step
        self.lcp = lcp
        table = [lcp]
        span = 1
        while 2 * span <= len(lcp):
            prev = table[-1]
            table.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        self._table = table

    def lce(self, i: int, j: int) -> int:
        """Length of the longest common prefix of ``t[i:]`` and ``t[j:]``."""
        n = self.n
        if i >= n or j >= n:
            return 0
        if i == j:
            return n - i
        lo, hi = self._rank_list[i], self._rank_list[j]
        if lo > hi:
            lo, hi = hi, lo
        level = (hi - lo).bit_length() - 1
        row = self._table[level]
        return int(min(row[lo], row[hi - (1 << level)]))

    def has_period(self, start: int, stop: int, pi: int) -> bool:
        """Whether ``t[start:stop]`` has period ``pi``, in O(1)."""
        length = stop - start
        if not (0 <= start < stop <= self.n and 1 <= pi <= length):
            raise ValueError(f"bad period query ({start}, {stop}, {pi})")
        return self.lce(start, start + pi) >= length - pi


def build_lce_index(t: Sequence) -> LceIndex:
    return LceIndex(t)


def query_has_period(idx: LceIndex, start: int, stop: int, pi: int) -> bool:
    return idx.has_period(start, stop, pi)


def find_high_period_window(p: Sequence, k: int) -> tuple[int, Sequence]:
    """Leftmost window of length ``3k`` whose shortest period exceeds ``k``.

    Requires ``1 <= k <= min(shortest_period(p) - 1, len(p) / 3)``; such a
    window then always exists. Window periods come from the runs sweep over a
    prefix that doubles until a qualifying window shows up, which gives the same
    leftmost answer as sweeping the whole string.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if 3 * k > len(p):
        raise ValueError(f"k={k} exceeds |p|/3 = {len(p) / 3:g}")
    if shortest_period(p) <= k:
        raise ValueError(f"k={k} is not below the shortest period of p")
    m = 3 * k
    limit = min(len(p), 2 * m)
    while True:
        for i, period in enumerate(periods_of_length_m(p[:limit], m)):
            if period is APERIODIC or period > k:
                return i, p[i : i + m]
        if limit == len(p):
            raise AssertionError("no high-period window found")  # unreachable: k is below the shortest period
        limit = min(len(p), 2 * limit)
