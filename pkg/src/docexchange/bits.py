"""Bit-string plumbing.

A bit string is held as ``bytes`` with one symbol (0 or 1) per byte, which keeps
slicing and equality at C speed. Packed forms are MSB-first.
"""
from __future__ import annotations

import random
from typing import Sequence, Union

import numpy as np

BitsLike = Union[str, bytes, bytearray, Sequence[int], np.ndarray]

_ASCII_TO_BIT = bytes.maketrans(b"01", b"\x00\x01")
_BIT_TO_ASCII = bytes.maketrans(b"\x00\x01", b"01")


def as_bits(value: BitsLike) -> bytes:
    """Normalize ``value`` to the one-symbol-per-byte representation."""
    if isinstance(value, bytes):
        out = value
    elif isinstance(value, str):
        if value.strip("01"):
            raise ValueError("bit string may only contain '0' and '1'")
        return value.encode("ascii").translate(_ASCII_TO_BIT)
    elif isinstance(value, np.ndarray):
        out = value.astype(np.uint8, copy=False).tobytes()
    else:
        out = bytes(value)
    if out.translate(None, b"\x00\x01"):
        raise ValueError("bit string symbols must be 0 or 1")
    return out


def to_str(bits: bytes) -> str:
    return bits.translate(_BIT_TO_ASCII).decode("ascii")


def pack_bits(bits: bytes) -> bytes:
    """Pack to bytes MSB-first; the final byte is zero-padded."""
    if not bits:
        return b""
    return np.packbits(np.frombuffer(bits, dtype=np.uint8)).tobytes()


def unpack_bits(data: bytes, nbits: int | None = None) -> bytes:
    arr = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if nbits is not None:
        if nbits > arr.size:
            raise ValueError(f"need {nbits} bits, only {arr.size} available")
        arr = arr[:nbits]
    return arr.tobytes()


def int_to_bits(value: int, width: int) -> bytes:
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    if width == 0:
        return b""
    return format(value, f"0{width}b").encode("ascii").translate(_ASCII_TO_BIT)


def bits_to_int(bits: bytes) -> int:
    if not bits:
        return 0
    return int(bits.translate(_BIT_TO_ASCII), 2)


def random_bits(n: int, rng: random.Random) -> bytes:
    if n == 0:
        return b""
    return int_to_bits(rng.getrandbits(n), n)


def bit_width(value: int) -> int:
    """Bits needed to store integers in ``[0, value]`` (at least one)."""
    return max(1, int(value).bit_length())
