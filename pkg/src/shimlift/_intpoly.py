"""Dense integer polynomial multiplication by packing into one big integer.

Coefficient arrays are packed little-endian into fixed-width byte slots wide
enough that no column sum can overflow into its neighbour, multiplied as
single integers, and unpacked.  gmpy2 does the big multiply when available;
plain Python integers are a working fallback.
"""

from __future__ import annotations

__all__ = ["convolve"]

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    def _mpz(x):
        return x


def _mul_nonneg(a: list, b: list) -> list:
    la, lb = len(a), len(b)
    maxa = max(a)
    maxb = max(b)
    if maxa == 0 or maxb == 0:
        return [0] * (la + lb - 1)
    nza = sum(1 for x in a if x)
    nzb = sum(1 for x in b if x)
    bits = maxa.bit_length() + maxb.bit_length() + min(nza, nzb).bit_length() + 1
    slot = (bits + 7) // 8
    bufa = bytearray(la * slot)
    for i, x in enumerate(a):
        if x:
            bufa[i * slot:(i + 1) * slot] = x.to_bytes(slot, "little")
    bufb = bytearray(lb * slot)
    for i, x in enumerate(b):
        if x:
            bufb[i * slot:(i + 1) * slot] = x.to_bytes(slot, "little")
    A = _mpz(int.from_bytes(bytes(bufa), "little"))
    B = _mpz(int.from_bytes(bytes(bufb), "little"))
    C = int(A * B)
    lc = la + lb - 1
    raw = C.to_bytes(lc * slot, "little")
    return [int.from_bytes(raw[i * slot:(i + 1) * slot], "little") for i in range(lc)]


def convolve(a: list, b: list) -> list:
    """Full convolution of two integer coefficient lists, any signs."""
    if not a or not b:
        return []
    if min(a) >= 0 and min(b) >= 0:
        return _mul_nonneg(a, b)
    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    lc = len(a) + len(b) - 1
    out = [0] * lc
    if any(ap):
        if any(bp):
            for i, v in enumerate(_mul_nonneg(ap, bp)):
                out[i] += v
        if any(bn):
            for i, v in enumerate(_mul_nonneg(ap, bn)):
                out[i] -= v
    if any(an):
        if any(bp):
            for i, v in enumerate(_mul_nonneg(an, bp)):
                out[i] -= v
        if any(bn):
            for i, v in enumerate(_mul_nonneg(an, bn)):
                out[i] += v
    return out
