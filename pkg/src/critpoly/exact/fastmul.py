"""Kronecker-substitution products for coefficient vectors.

Both routines pack a coefficient vector into one big integer, multiply
with GMP, and unpack.  The mod-p variant works on numpy int64 residues
below 2**31 and uses fixed 80-bit slots, which holds convolution sums of
up to 2**18 terms.
"""

from __future__ import annotations

import gmpy2
import numpy as np

_SLOT = 10  # bytes per coefficient slot for mod-p products
_MAX_MODP_LEN = 1 << 18
_SMALL = 24


def _pack_modp(x: np.ndarray) -> gmpy2.mpz:
    buf = np.zeros((len(x), _SLOT), dtype=np.uint8)
    buf[:, :8] = np.ascontiguousarray(x, dtype="<u8").view(np.uint8).reshape(-1, 8)
    return gmpy2.mpz.from_bytes(buf.tobytes(), "little")


def mul_modp(a: np.ndarray, b: np.ndarray, p: int, n: int | None = None) -> np.ndarray:
    """Product of residue vectors ``a`` and ``b`` modulo ``p``.

    With ``n`` given, only the first ``n`` coefficients are returned
    (truncated power-series product).
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.zeros(0 if n is None else n, dtype=np.int64)
    if n is not None:
        a = a[:n]
        b = b[:n]
        la, lb = len(a), len(b)
    full = la + lb - 1
    out_len = full if n is None else min(n, full)
    if min(la, lb) <= _SMALL:
        if la < lb:
            a, b, la, lb = b, a, lb, la
        acc = np.zeros(full, dtype=np.int64)
        for i in range(lb):
            c = int(b[i])
            if c:
                acc[i : i + la] = (acc[i : i + la] + c * a) % p
        res = acc[:out_len]
    else:
        if max(la, lb) > _MAX_MODP_LEN:
            raise ValueError("operand too long for 80-bit Kronecker slots")
        prod = _pack_modp(a) * _pack_modp(b)
        raw = prod.to_bytes(_SLOT * full, "little")
        buf = np.frombuffer(raw, dtype=np.uint8).reshape(full, _SLOT)[:out_len]
        lo = np.ascontiguousarray(buf[:, :8]).view("<u8").ravel()
        hi = np.ascontiguousarray(buf[:, 8:]).view("<u2").ravel().astype(np.int64)
        res = ((lo % np.uint64(p)).astype(np.int64) + hi * ((1 << 64) % p)) % p
    if n is not None and len(res) < n:
        res = np.concatenate([res, np.zeros(n - len(res), dtype=np.int64)])
    return res


def mul_int(a: list[int], b: list[int]) -> list[int]:
    """Exact product of integer coefficient lists (signed Kronecker)."""
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if min(la, lb) <= _SMALL:
        out = [0] * (la + lb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    bound = max(abs(x) for x in a).bit_length() + max(abs(x) for x in b).bit_length()
    bits = bound + min(la, lb).bit_length() + 2
    nb = (bits + 7) // 8
    A = _pack_signed(a, nb)
    B = _pack_signed(b, nb)
    full = la + lb - 1
    half = 1 << (8 * nb - 1)
    bias = gmpy2.mpz.from_bytes((b"\x00" * (nb - 1) + b"\x80") * full, "little")
    C = A * B + bias
    raw = C.to_bytes(nb * full + 1, "little")
    return [
        int.from_bytes(raw[i * nb : (i + 1) * nb], "little") - half for i in range(full)
    ]


def _pack_signed(x: list[int], nb: int) -> gmpy2.mpz:
    pos = b"".join((v if v > 0 else 0).to_bytes(nb, "little") for v in x)
    neg = b"".join((-v if v < 0 else 0).to_bytes(nb, "little") for v in x)
    return gmpy2.mpz.from_bytes(pos, "little") - gmpy2.mpz.from_bytes(neg, "little")
