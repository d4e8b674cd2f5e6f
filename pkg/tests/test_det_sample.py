import itertools
import math
import random

import pytest

from docexchange.bits import random_bits
from docexchange.det_sample import (
    DetSample,
    PeriodicDetSample,
    agrees,
    build_det_sample,
    build_periodic_det_sample,
    check_sample,
    eliminate_candidates,
    separates_rotations,
)
from oracles import all_strings, period_bf


def test_examples():
    s = build_det_sample(b"\x00\x01")
    assert (s.positions, s.shift) == ((1,), 0)
    s = build_det_sample(b"\x00\x00\x01")
    assert (s.positions, s.shift) == ((2,), 0)
    assert check_sample("aab", [2], 0)
    assert not check_sample("aab", [], 0)


def test_periodic_sample_of_period_one_is_empty():
    s = build_periodic_det_sample(b"\x01" * 6, 1)
    assert set(s.positions) <= {0}
    assert separates_rotations(b"\x01" * 6, s.positions, 1)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        build_det_sample(b"\x01\x01\x01\x01")
    with pytest.raises(ValueError):
        build_periodic_det_sample(b"\x00\x01" * 2, 2)  # 3 * 2 > 4
    with pytest.raises(ValueError):
        build_periodic_det_sample(b"\x00\x01" * 4, 4)  # 4 is not the shortest period
    with pytest.raises(ValueError):
        check_sample("abcd", [0], 3)


def test_forbidden_offsets():
    s = DetSample((1,), (1,), 2, 9)
    assert list(s.forbidden_offsets()) == [-2, -1, 0, 1, 2]


def test_check_sample_soundness_by_texts():
    """Agreeing windows never sit at a forbidden offset from a real occurrence:
    every text holding the pattern at offset d from an agreeing window is tried."""
    for m in range(1, 11):
        for p in all_strings(m):
            if 2 * period_bf(p) <= m:
                continue
            sample = build_det_sample(p)
            for d in sample.forbidden_offsets():
                if d == 0:
                    continue
                lo = min(0, d)
                free = [i for i in range(lo, lo + m + abs(d)) if not d <= i < d + m]
                for fill in itertools.product((0, 1), repeat=len(free)):
                    text = dict(zip(free, fill))
                    text.update({d + i: c for i, c in enumerate(p)})
                    assert not all(text[q] == v for q, v in zip(sample.positions, sample.values))


def test_sample_size_bound_random_long_patterns():
    rng = random.Random(11)
    for _ in range(300):
        m = rng.randint(17, 200)
        p = random_bits(m, rng)
        if 2 * period_bf(p) <= m:
            continue
        s = build_det_sample(p)
        assert check_sample(p, s.positions, s.shift)
        assert len(s.positions) <= math.ceil(math.log2(m // 2 + 1))


def test_eliminate_nonperiodic_finds_planted_occurrence():
    rng = random.Random(5)
    for _ in range(400):
        m = rng.randint(6, 40)
        p = random_bits(m, rng)
        if 2 * period_bf(p) <= m:
            continue
        sample = build_det_sample(p)
        width = (m // 2) // 2 + 1  # any two candidates are at most m // 4 apart
        text = bytearray(random_bits(m + 2 * width, rng))
        at = rng.randrange(width, 2 * width)
        text[at : at + m] = p
        text = bytes(text)
        lo = rng.randint(at - width + 1, at)
        starts = range(lo, lo + width)
        assert eliminate_candidates(sample, text, starts) == at


def test_eliminate_nonperiodic_leaves_at_most_one():
    rng = random.Random(6)
    for _ in range(400):
        m = rng.randint(6, 40)
        p = random_bits(m, rng)
        if 2 * period_bf(p) <= m:
            continue
        sample = build_det_sample(p)
        width = (m // 2) // 2 + 1
        text = random_bits(m + width, rng)
        starts = list(range(width))
        agreeing = [c for c in starts if agrees(sample, text, c)]
        offsets = set(sample.forbidden_offsets()) - {0}
        survivors = [c for c in agreeing if not any(c - o in offsets for o in agreeing)]
        assert len(survivors) <= 1
        assert eliminate_candidates(sample, text, starts) == (survivors[0] if survivors else None)


def test_eliminate_periodic_leftmost():
    p = b"\x00\x01\x01" * 4
    sample = build_periodic_det_sample(p, 3)
    assert isinstance(sample, PeriodicDetSample)
    text = b"\x01" + p + b"\x00\x01"
    assert eliminate_candidates(sample, text, range(0, 4), lambda c: text[c + 3 : c + 12] == text[c : c + 9]) == 1
    assert eliminate_candidates(sample, text, range(2, 4), lambda c: True) is None
