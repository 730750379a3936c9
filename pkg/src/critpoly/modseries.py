"""Power series over F_p, truncated to a fixed length.

A series is a numpy int64 array of residues, constant term first.  Products
go through Kronecker substitution; composition uses baby-step/giant-step
with BLAS matrix products on 11-bit limbs.
"""

from __future__ import annotations

import math

import numpy as np

from .exact.fastmul import mul_modp
from .qseries import pentagonal_coeffs


def mul(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    return mul_modp(a, b, p, n)


def pad(a: np.ndarray, n: int) -> np.ndarray:
    if len(a) >= n:
        return a[:n].copy()
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    return out


def inverse(a: np.ndarray, p: int, n: int) -> np.ndarray:
    """1/a mod t^n by Newton iteration; a[0] must be a unit."""
    a0 = int(a[0]) % p
    if a0 == 0:
        raise ZeroDivisionError("constant term vanishes mod p")
    x = np.array([pow(a0, -1, p)], dtype=np.int64)
    m = 1
    while m < n:
        m = min(2 * m, n)
        e = mul(a[:m], x, p, m)
        e = (-e) % p
        e[0] = (e[0] + 2) % p
        x = mul(x, e, p, m)
    return pad(x, n)


def power(a: np.ndarray, k: int, p: int, n: int) -> np.ndarray:
    if k < 0:
        return power(inverse(a, p, n), -k, p, n)
    out = None
    base = pad(a, n)
    while k:
        if k & 1:
            out = base if out is None else mul(out, base, p, n)
        k >>= 1
        if k:
            base = mul(base, base, p, n)
    if out is None:
        out = np.zeros(n, dtype=np.int64)
        out[0] = 1
    return out


def theta(a: np.ndarray, p: int, start: int = 0) -> np.ndarray:
    """t d/dt on coefficients indexed from ``start``."""
    k = np.arange(start, start + len(a), dtype=np.int64) % p
    return (a * k) % p


def derivative(a: np.ndarray, p: int) -> np.ndarray:
    """d/dt; length drops by one."""
    k = np.arange(1, len(a), dtype=np.int64) % p
    return (a[1:] * k) % p


def inverses_upto(n: int, p: int) -> np.ndarray:
    """Table inv[i] = i^-1 mod p for 1 <= i < n (inv[0] = 0)."""
    inv = [0, 1] + [0] * max(0, n - 2)
    for i in range(2, n):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    return np.array(inv[:n], dtype=np.int64)


def integral(a: np.ndarray, p: int) -> np.ndarray:
    """Antiderivative with zero constant term; length grows by one."""
    inv = inverses_upto(len(a) + 1, p)
    out = np.zeros(len(a) + 1, dtype=np.int64)
    out[1:] = (a * inv[1:]) % p
    return out


def log(a: np.ndarray, p: int, n: int) -> np.ndarray:
    """log of a series with constant term 1."""
    da = derivative(pad(a, n + 1), p)[:n]
    q = mul(da, inverse(a, p, n), p, n)
    return integral(q[: n - 1], p)[:n]


def exp(s: np.ndarray, p: int, n: int) -> np.ndarray:
    """exp of a series with zero constant term (requires n < p)."""
    if int(s[0]) % p:
        raise ValueError("exp needs zero constant term")
    e = np.ones(1, dtype=np.int64)
    m = 1
    while m < n:
        m = min(2 * m, n)
        e = pad(e, m)
        corr = (pad(s, m) - log(e, p, m)) % p
        corr[0] = (corr[0] + 1) % p
        e = mul(e, corr, p, m)
    return pad(e, n)


def _limb_matmul(g: np.ndarray, baby: list[np.ndarray], p: int) -> np.ndarray:
    """(g @ baby) mod p exactly, for k <= 2048 columns of g."""
    k = g.shape[1]
    if k > 2048:
        raise ValueError("block too wide for exact float products")
    bm = np.stack(baby[:k])
    gf = g.astype(np.float64)
    acc = np.zeros((g.shape[0], bm.shape[1]), dtype=np.int64)
    shift = 1
    for limb in range(3):
        part = ((bm >> (11 * limb)) & 0x7FF).astype(np.float64)
        r = (gf @ part).astype(np.int64) % p
        acc = (acc + r * shift) % p
        shift = shift * 2048 % p
    return acc


def compose_many(gs: list[np.ndarray], Q: np.ndarray, p: int, n: int) -> list[np.ndarray]:
    """g(Q(t)) mod t^n for each g, with Q[0] = 0."""
    if len(Q) and int(Q[0]) % p:
        raise ValueError("inner series must have zero constant term")
    gs = [pad(g, min(len(g), n)) if len(g) else np.zeros(1, dtype=np.int64) for g in gs]
    longest = max(len(g) for g in gs)
    k = max(1, math.isqrt(longest - 1) + 1) if longest > 1 else 1
    Qn = pad(Q, n)
    baby = [np.zeros(n, dtype=np.int64)]
    baby[0][0] = 1
    for _ in range(1, k):
        baby.append(mul(baby[-1], Qn, p, n))
    giant = mul(baby[-1], Qn, p, n) if k > 1 else Qn
    out = []
    for g in gs:
        nb = -(-len(g) // k)
        gm = np.zeros((nb, k), dtype=np.int64)
        gm.ravel()[: len(g)] = g
        blocks = _limb_matmul(gm, baby, p)
        res = blocks[nb - 1]
        for i in range(nb - 2, -1, -1):
            res = (mul(res, giant, p, n) + blocks[i]) % p
        out.append(res)
    return out


def compose(g: np.ndarray, Q: np.ndarray, p: int, n: int) -> np.ndarray:
    return compose_many([g], Q, p, n)[0]


def revert(U: np.ndarray, p: int, n: int) -> np.ndarray:
    """Compositional inverse Q with U(Q(t)) = t mod t^n; U = U1 t + ..., U1 a unit."""
    if int(U[0]) % p or int(U[1]) % p == 0:
        raise ValueError("series is not invertible under composition")
    Q = np.zeros(2, dtype=np.int64)
    Q[1] = pow(int(U[1]), -1, p)
    dU = derivative(pad(U, n + 1), p)
    m = 2
    while m < n:
        m = min(2 * m, n)
        Qm = pad(Q, m)
        uq, dq = compose_many([pad(U, m), dU[:m]], Qm, p, m)
        uq[1] = (uq[1] - 1) % p
        step = mul(uq, inverse(dq, p, m), p, m)
        Q = (Qm - step) % p
    return pad(Q, n)


# -- modular-function expansions mod p ----------------------------------------


def pentagonal(p: int, n: int) -> np.ndarray:
    return np.array(pentagonal_coeffs(n), dtype=np.int64) % p


def sigma3(n: int, p: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    for d in range(1, n):
        out[d::d] = (out[d::d] + pow(d, 3, p)) % p
    return out


def e4(p: int, n: int) -> np.ndarray:
    out = (240 * sigma3(n, p)) % p
    out[0] = 1
    return out


def jq(p: int, n: int) -> np.ndarray:
    """q*j(q) as a power series mod p."""
    num = power(e4(p, n), 3, p, n)
    den = power(pentagonal(p, n), 24, p, n)
    return mul(num, inverse(den, p, n), p, n)


def j_inverse(p: int, n: int) -> np.ndarray:
    """Q(u) with 1/j(Q(u)) = u, from the Gauss hypergeometric period ratio.

    With x = 1728u, F = 2F1(1/12, 5/12; 1; x) and G the companion series of
    the logarithmic solution, q = u * exp(G/F).  Requires 12n + 5 < p.
    """
    if 12 * n + 6 >= p:
        raise ValueError("modulus too small for the hypergeometric route")
    m = n - 1
    F = np.zeros(m, dtype=np.int64)
    G = np.zeros(m, dtype=np.int64)
    t, h = 1, 0
    F[0] = 1
    for k in range(1, m):
        j = k - 1
        a, b = 1 + 12 * j, 5 + 12 * j
        t = t * 12 * a % p * b % p * pow(k * k, -1, p) % p
        h = (h + 12 * pow(a, -1, p) + 12 * pow(b, -1, p) - 2 * pow(k, -1, p)) % p
        F[k] = t
        G[k] = t * h % p
    S = mul(G, inverse(F, p, m), p, m)
    E = exp(S, p, m)
    out = np.zeros(n, dtype=np.int64)
    out[1:] = E
    return out
