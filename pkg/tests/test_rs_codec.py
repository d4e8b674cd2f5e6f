import random

import numpy as np
import pytest

from docexchange.rs_codec import (
    EXP,
    FIELD_POLY,
    ORDER,
    decode_streams,
    deinterleave_signatures,
    gf_div,
    gf_inv,
    gf_mul,
    gf_pow,
    hamming_recover,
    hamming_redundancy,
    interleave_signatures,
    rs_decode,
    rs_encode,
)


def slow_mul(a, b):
    """Carry-less product reduced by the field polynomial, bit by bit."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> 16:
            a ^= FIELD_POLY
    return out


def lfsr_parity(data, t):
    """Remainder of data(x) * x^2t by prod (x - alpha^j), j = 1..2t."""
    if t == 0:
        return []
    gen = [1]
    for j in range(1, 2 * t + 1):
        root = EXP[j]
        nxt = gen + [0]
        for i, c in enumerate(gen):
            nxt[i + 1] ^= slow_mul(c, root)
        gen = nxt
    reg = [0] * (2 * t)
    for d in data:
        fb = d ^ reg[0]
        reg = reg[1:] + [0]
        if fb:
            for i in range(2 * t):
                reg[i] ^= slow_mul(fb, gen[i + 1])
    return reg


def test_field_is_primitive():
    assert len(set(EXP[:ORDER])) == ORDER
    assert EXP[ORDER] == 1


def test_field_axioms_random():
    rng = random.Random(0)
    for _ in range(3000):
        a, b, c = (rng.randrange(1 << 16) for _ in range(3))
        assert gf_mul(a, b) == slow_mul(a, b) == gf_mul(b, a)
        assert gf_mul(a, gf_mul(b, c)) == gf_mul(gf_mul(a, b), c)
        assert gf_mul(a, b ^ c) == gf_mul(a, b) ^ gf_mul(a, c)
        if a:
            assert gf_mul(a, gf_inv(a)) == 1
            assert gf_div(gf_mul(b, a), a) == b
    assert gf_pow(0, 0) == 1 and gf_pow(0, 3) == 0
    with pytest.raises(ZeroDivisionError):
        gf_div(1, 0)


def test_encoder_matches_lfsr():
    rng = random.Random(1)
    for _ in range(200):
        t = rng.randint(0, 8)
        data = [rng.randrange(1 << 16) for _ in range(rng.randint(0, 60))]
        assert rs_encode(data, t) == lfsr_parity(data, t)


def test_codeword_has_the_roots():
    data = [5, 0, 65535, 12]
    word = data + rs_encode(data, 3)
    for j in range(1, 7):
        acc = 0
        for sym in word:
            acc = gf_mul(acc, EXP[j]) ^ sym
        assert acc == 0


def test_correct_up_to_t():
    rng = random.Random(2)
    for _ in range(300):
        t = rng.randint(1, 8)
        data = [rng.randrange(1 << 16) for _ in range(rng.randint(1, 100))]
        word = data + rs_encode(data, t)
        for pos in rng.sample(range(len(word)), rng.randint(0, t)):
            word[pos] ^= rng.randrange(1, 1 << 16)
        assert rs_decode(word, len(data), t) == data


def test_beyond_t_detects_or_miscorrects():
    rng = random.Random(3)
    flagged = 0
    for _ in range(200):
        t = rng.randint(1, 6)
        data = [rng.randrange(1 << 16) for _ in range(rng.randint(1, 60))]
        word = data + rs_encode(data, t)
        for pos in rng.sample(range(len(word)), min(len(word), t + 1)):
            word[pos] ^= rng.randrange(1, 1 << 16)
        out = rs_decode(word, len(data), t)
        flagged += out is None
        assert out is None or out != data
    assert flagged > 100


def test_decode_streams_batch():
    rng = np.random.default_rng(4)
    data = rng.integers(0, 1 << 16, size=(5, 30))
    parity = np.array([rs_encode(row.tolist(), 2) for row in data])
    words = np.hstack([data, parity])
    words[1, 3] ^= 7
    words[3, [0, 31]] ^= 1
    out, failed, corrected = decode_streams(words, 2)
    assert (out == data).all() and not failed.any()
    assert corrected.tolist() == [0, 1, 0, 2, 0]


def test_length_checks():
    with pytest.raises(ValueError):
        rs_encode([0] * (ORDER - 1), 1)
    with pytest.raises(ValueError):
        rs_decode([0, 0, 0], 2, 1)
    with pytest.raises(ValueError):
        rs_encode([1 << 16], 1)


def test_hamming_redundancy_round_trip():
    s = list(range(40))
    red = hamming_redundancy(s, 3)
    damaged = list(s)
    damaged[0], damaged[7], damaged[39] = 9, 9, 9
    assert hamming_recover(damaged, red, 3) == s


def test_interleave_example():
    rng = random.Random(5)
    sigs = [bytes(rng.randrange(2) for _ in range(40)) for _ in range(6)]
    seqs = interleave_signatures(sigs)
    assert len(seqs) == 3 and all(len(q) == 6 for q in seqs)
    # first symbol of the first signature is its first 16 bits, MSB first
    assert seqs[0][0] == int("".join(map(str, sigs[0][:16])), 2)
    assert seqs[2][0] == int("".join(map(str, sigs[0][32:])) + "0" * 8, 2)
    assert deinterleave_signatures(seqs, 40) == sigs
    assert interleave_signatures([]) == []
    with pytest.raises(ValueError):
        deinterleave_signatures(seqs, 60)
