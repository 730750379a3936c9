"""Compiled inner loops for mod-p linear algebra (moduli below 2**31)."""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _powmod(a, e, p):
    r = 1
    a %= p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


@numba.njit(cache=True)
def _axpy_shoup(dst, src, c, lo, hi, p):
    # dst[lo:hi] -= c * src[lo:hi]  (mod p), Shoup reduction
    cs = (c << 32) // p
    for t in range(lo, hi):
        e = src[t]
        if e == 0:
            continue
        q = (cs * e) >> 32
        r = c * e - q * p
        if r >= p:
            r -= p
        v = dst[t] - r
        if v < 0:
            v += p
        dst[t] = v


@numba.njit(cache=True)
def order_basis(E, B, deg, p, start, stop):
    """Advance a Hermite-Pade order basis from order ``start`` to ``stop``.

    E[i] holds the residual series of row i, B[i, a, t] the coefficient of
    y^t in the a-th entry of row i.  Returns the order reached; a value
    below ``stop`` means B ran out of degree capacity.
    """
    m = E.shape[0]
    L = E.shape[1]
    cap = B.shape[2]
    ncol = B.shape[1]
    for k in range(start, stop):
        piv = -1
        for i in range(m):
            if E[i, k] != 0:
                if piv < 0 or deg[i] < deg[piv]:
                    piv = i
        if piv < 0:
            continue
        dp = deg[piv]
        if dp + 2 > cap:
            return k
        inv = _powmod(E[piv, k], p - 2, p)
        for i in range(m):
            if i == piv:
                continue
            e = E[i, k]
            if e == 0:
                continue
            c = e * inv % p
            _axpy_shoup(E[i], E[piv], c, k, L, p)
            for a in range(ncol):
                _axpy_shoup(B[i, a], B[piv, a], c, 0, dp + 1, p)
        row = E[piv]
        for t in range(L - 1, k, -1):
            row[t] = row[t - 1]
        row[k] = 0
        for a in range(ncol):
            b = B[piv, a]
            for t in range(dp + 1, 0, -1):
                b[t] = b[t - 1]
            b[0] = 0
        deg[piv] = dp + 1
    return stop


@numba.njit(cache=True)
def nullspace_mod_p(A, p):
    """Row-reduce A in place; return (rank, pivot columns)."""
    rows, cols = A.shape
    pivots = np.full(cols, -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        sel = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for t in range(cols):
                tmp = A[r, t]
                A[r, t] = A[sel, t]
                A[sel, t] = tmp
        inv = _powmod(A[r, c], p - 2, p)
        for t in range(c, cols):
            A[r, t] = A[r, t] * inv % p
        for i in range(rows):
            if i != r and A[i, c] != 0:
                _axpy_shoup(A[i], A[r], A[i, c], c, cols, p)
        pivots[r] = c
        r += 1
    return r, pivots[:r]
