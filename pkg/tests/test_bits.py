import random

import numpy as np
import pytest

from docexchange.bits import as_bits, bit_width, bits_to_int, int_to_bits, pack_bits, random_bits, to_str, unpack_bits


def test_as_bits_accepts_common_inputs():
    assert as_bits("0110") == b"\x00\x01\x01\x00"
    assert as_bits([1, 0]) == b"\x01\x00"
    assert as_bits(np.array([1, 1], dtype=np.uint8)) == b"\x01\x01"
    assert as_bits(b"\x01") == b"\x01"
    with pytest.raises(ValueError):
        as_bits("012")
    with pytest.raises(ValueError):
        as_bits(b"\x02")


def test_pack_is_msb_first_with_zero_padding():
    assert pack_bits(as_bits("10000000" "1")) == b"\x80\x80"
    assert unpack_bits(b"\x80\x80", 9) == as_bits("100000001")
    assert to_str(unpack_bits(b"\xa0")) == "10100000"


def test_round_trips():
    rng = random.Random(0)
    for _ in range(200):
        bits = random_bits(rng.randint(0, 70), rng)
        assert unpack_bits(pack_bits(bits), len(bits)) == bits
        value = rng.randrange(1 << 40)
        assert bits_to_int(int_to_bits(value, 40)) == value
    assert bit_width(0) == 1 and bit_width(255) == 8 and bit_width(256) == 9
