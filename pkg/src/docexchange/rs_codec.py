"""Systematic Reed-Solomon coding over GF(2^16).

A codeword is ``data + parity`` read as the polynomial whose highest-degree
coefficient is the first symbol; its roots are alpha^1 .. alpha^(2t) with alpha
a root of x^16 + x^12 + x^3 + x + 1. Symbols serialize as 16-bit little-endian.

Many equal-length streams are coded at once as rows of a 2-D array, which is
how the protocol uses the codec (one stream per interleaved symbol column).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

FIELD_BITS = 16
FIELD_POLY = 0x1100B
ORDER = (1 << FIELD_BITS) - 1
SYMBOL_BITS = FIELD_BITS


def _tables() -> tuple[list[int], list[int]]:
    exp = [0] * (2 * ORDER)
    log = [0] * (ORDER + 1)
    x = 1
    for i in range(ORDER):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x >> FIELD_BITS:
            x ^= FIELD_POLY
    exp[ORDER:] = exp[:ORDER]
    return exp, log


EXP, LOG = _tables()
_EXP = np.array(EXP, dtype=np.int64)
_LOG = np.array(LOG, dtype=np.int64)


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by zero in GF(2^16)")
    if a == 0:
        return 0
    return EXP[LOG[a] - LOG[b] + ORDER]


def gf_inv(a: int) -> int:
    return gf_div(1, a)


def gf_pow(a: int, e: int) -> int:
    if a == 0:
        return 0 if e else 1
    return EXP[(LOG[a] * e) % ORDER]


def _vmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of symbol arrays (broadcasting)."""
    out = _EXP[_LOG[a] + _LOG[b]]
    return np.where((a == 0) | (b == 0), 0, out)


def _evaluate(words: np.ndarray, exponents: Sequence[int]) -> np.ndarray:
    """Evaluate each row, read as a polynomial, at alpha^e for each e.

    Returns an array of shape ``(rows, len(exponents))``.
    """
    rows, length = words.shape
    out = np.zeros((rows, len(exponents)), dtype=np.int64)
    if length == 0:
        return out
    nz = words != 0
    logs = _LOG[words]
    degree = np.arange(length - 1, -1, -1, dtype=np.int64)
    for col, e in enumerate(exponents):
        terms = np.where(nz, _EXP[(logs + (degree * e) % ORDER) % ORDER], 0)
        out[:, col] = np.bitwise_xor.reduce(terms, axis=1)
    return out


@lru_cache(maxsize=None)
def _parity_solver(t: int) -> np.ndarray:
    """Inverse of the Vandermonde system mapping parity coefficients to their
    values at alpha^1 .. alpha^(2t)."""
    size = 2 * t
    mat = [[gf_pow(EXP[j], m) for m in range(size)] + [int(i == j - 1) for i in range(size)]
           for j in range(1, size + 1)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if mat[r][col])
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = gf_inv(mat[col][col])
        mat[col] = [gf_mul(v, inv) for v in mat[col]]
        for r in range(size):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [v ^ gf_mul(f, w) for v, w in zip(mat[r], mat[col])]
    return np.array([row[size:] for row in mat], dtype=np.int64)


def _check_lengths(data_len: int, t: int) -> None:
    if t < 0 or data_len < 0:
        raise ValueError("lengths must be non-negative")
    if data_len + 2 * t > ORDER:
        raise ValueError(f"codeword length {data_len + 2 * t} exceeds {ORDER} symbols")


def encode_streams(data: np.ndarray, t: int) -> np.ndarray:
    """Parity symbols (``rows x 2t``) for each row of ``data``."""
    data = np.asarray(data, dtype=np.int64)
    if data.ndim != 2:
        raise ValueError("expected a 2-D array of streams")
    rows, length = data.shape
    _check_lengths(length, t)
    if t == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    size = 2 * t
    # parity p(x) must take the value d(alpha^j) * alpha^(2tj) at every root
    values = _evaluate(data, range(1, size + 1))
    values = _vmul(values, _EXP[(np.arange(1, size + 1) * size) % ORDER][None, :])
    solver = _parity_solver(t)  # coefficient m as a combination of the values
    coeffs = np.zeros((rows, size), dtype=np.int64)
    for j in range(size):
        coeffs ^= _vmul(values[:, j : j + 1], solver[:, j][None, :])
    return coeffs[:, ::-1].copy()


def rs_encode(data: Sequence[int], t: int) -> list[int]:
    """The ``2t`` parity symbols of the systematic codeword for ``data``."""
    arr = np.asarray(list(data), dtype=np.int64).reshape(1, -1)
    if arr.size and (arr.min() < 0 or arr.max() > ORDER):
        raise ValueError("symbols must lie in [0, 2^16)")
    return encode_streams(arr, t)[0].tolist()


def _berlekamp_massey(synd: list[int]) -> list[int]:
    """Error-locator coefficients, constant term first."""
    c, b = [1], [1]
    length, shift, last = 0, 1, 1
    for n, s in enumerate(synd):
        d = s
        for i in range(1, length + 1):
            if i < len(c):
                d ^= gf_mul(c[i], synd[n - i])
        if d == 0:
            shift += 1
            continue
        coef = gf_div(d, last)
        nc = c + [0] * max(0, len(b) + shift - len(c))
        for i, v in enumerate(b):
            nc[i + shift] ^= gf_mul(coef, v)
        if 2 * length <= n:
            b, length, last, shift = c, n + 1 - length, d, 1
        else:
            shift += 1
        c = nc
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _correct_row(word: np.ndarray, synd: list[int], t: int) -> Optional[np.ndarray]:
    """Fix the errors of one codeword, or None if they are not decodable."""
    n = word.size
    locator = _berlekamp_massey(synd)
    degree = len(locator) - 1
    if degree > t:
        return None
    # Chien search: position i holds locator X = alpha^(n-1-i)
    power = np.arange(n - 1, -1, -1, dtype=np.int64)
    acc = np.zeros(n, dtype=np.int64)
    for m, coef in enumerate(locator):
        if coef:
            acc ^= _EXP[(LOG[coef] + (-m * power) % ORDER) % ORDER]
    where = np.flatnonzero(acc == 0)
    if where.size != degree:
        return None
    size = 2 * t
    omega = [0] * size
    for i, s in enumerate(synd):
        if s:
            for j, coef in enumerate(locator):
                if i + j < size and coef:
                    omega[i + j] ^= gf_mul(s, coef)
    fixed = word.copy()
    for pos in where.tolist():
        x_inv = EXP[(-(n - 1 - pos)) % ORDER]
        num = 0
        xp = 1
        for coef in omega:
            num ^= gf_mul(coef, xp)
            xp = gf_mul(xp, x_inv)
        den = 0
        xp = 1
        for m in range(1, len(locator), 2):
            den ^= gf_mul(locator[m], xp)
            xp = gf_mul(xp, gf_mul(x_inv, x_inv))
        if den == 0:
            return None
        fixed[pos] ^= gf_div(num, den)
    return fixed


def decode_streams(received: np.ndarray, t: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Correct each row of ``received`` (data followed by ``2t`` parity symbols).

    Returns ``(data, failed, corrected)``: the data part of every row after
    correction, a boolean mask of rows whose errors were detected but not
    decodable (those rows are returned uncorrected), and per-row counts of
    corrected symbols.
    """
    received = np.asarray(received, dtype=np.int64)
    rows, n = received.shape
    size = 2 * t
    if n < size:
        raise ValueError("received words shorter than the parity")
    _check_lengths(n - size, t)
    out = received.copy()
    failed = np.zeros(rows, dtype=bool)
    corrected = np.zeros(rows, dtype=np.int64)
    if t == 0:
        return out, failed, corrected
    synd = _evaluate(received, range(1, size + 1))
    for r in np.flatnonzero(synd.any(axis=1)).tolist():
        fixed = _correct_row(received[r], synd[r].tolist(), t)
        if fixed is None or _evaluate(fixed[None, :], range(1, size + 1)).any():
            failed[r] = True
            continue
        corrected[r] = int(np.count_nonzero(fixed != received[r]))
        out[r] = fixed
    return out[:, : n - size], failed, corrected


def rs_decode(received: Sequence[int], data_len: int, t: int) -> Optional[list[int]]:
    """Data symbols of ``received``, or None when decoding detects failure.

    With at most ``t`` symbol errors the result is exact; beyond that it is
    None or (undetectably) some other codeword's data.
    """
    arr = np.asarray(list(received), dtype=np.int64)
    if arr.size != data_len + 2 * t:
        raise ValueError(f"expected {data_len + 2 * t} symbols, got {arr.size}")
    data, failed, _ = decode_streams(arr.reshape(1, -1), t)
    if failed[0]:
        return None
    return data[0].tolist()


def hamming_redundancy(s: Sequence[int], k: int) -> list[int]:
    """Redundancy letting a receiver fix up to ``k`` substituted symbols of ``s``."""
    return rs_encode(s, k)


def hamming_recover(s_b: Sequence[int], redundancy: Sequence[int], k: int) -> Optional[list[int]]:
    return rs_decode(list(s_b) + list(redundancy), len(s_b), k)


def signature_matrix(sigs: Sequence[bytes], width: int) -> np.ndarray:
    """Bit blocks of equal ``width`` as a ``count x d`` array of 16-bit symbols."""
    d = -(-width // SYMBOL_BITS)
    count = len(sigs)
    bits = np.zeros((count, d * SYMBOL_BITS), dtype=np.int64)
    if count:
        block = np.frombuffer(b"".join(sigs), dtype=np.uint8)
        if block.size != count * width:
            raise ValueError(f"all signatures must be {width} bits wide")
        bits[:, :width] = block.reshape(count, width)
    weights = 1 << np.arange(SYMBOL_BITS - 1, -1, -1, dtype=np.int64)
    return bits.reshape(count, d, SYMBOL_BITS) @ weights


def matrix_signatures(symbols: np.ndarray, width: int) -> list[bytes]:
    """Inverse of :func:`signature_matrix`."""
    count, d = symbols.shape
    if d != -(-width // SYMBOL_BITS):
        raise ValueError(f"{d} symbols per signature do not match width {width}")
    shifts = np.arange(SYMBOL_BITS - 1, -1, -1, dtype=np.int64)
    bits = ((symbols[:, :, None] >> shifts) & 1).astype(np.uint8).reshape(count, -1)
    return [row[:width].tobytes() for row in bits]


def interleave_signatures(sigs: Sequence[bytes], symbol_bits: int = SYMBOL_BITS) -> list[list[int]]:
    """Split equal-width signatures into 16-bit symbols; sequence ``i`` holds
    symbol ``i`` of every signature, in order."""
    if symbol_bits != SYMBOL_BITS:
        raise ValueError("only 16-bit symbols are supported")
    if not sigs:
        return []
    width = len(sigs[0])
    return signature_matrix(sigs, width).T.tolist()


def deinterleave_signatures(seqs: Sequence[Sequence[int]], width: int) -> list[bytes]:
    d = -(-width // SYMBOL_BITS)
    if not seqs:
        return []
    if len(seqs) != d:
        raise ValueError(f"width {width} needs {d} sequences, got {len(seqs)}")
    if len({len(s) for s in seqs}) != 1:
        raise ValueError("sequences differ in length")
    return matrix_signatures(np.asarray(seqs, dtype=np.int64).T.reshape(len(seqs[0]), d), width)
