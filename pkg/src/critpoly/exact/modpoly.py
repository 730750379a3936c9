"""Polynomials over F_p and their factorization.

Coefficients live in numpy int64 arrays (constant term first) and the
modulus stays below 2**31, so single products fit in a machine word.
"""

from __future__ import annotations

import random
from typing import Iterable

import numpy as np

from .fastmul import mul_modp


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if len(nz) else a[:0]


class ModPoly:
    """Polynomial over F_p with residues in [0, p)."""

    __slots__ = ("p", "c")

    def __init__(self, coeffs: Iterable[int] | np.ndarray, p: int):
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.int64:
            arr = coeffs % p
        else:
            arr = np.array([int(v) % p for v in coeffs], dtype=np.int64)
        self.p = p
        self.c = _trim(arr)

    @classmethod
    def from_intpoly(cls, f, p: int) -> "ModPoly":
        vals = []
        for c in f.coeffs:
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            vals.append(c.numerator * pow(c.denominator, -1, p))
        return cls(vals, p)

    def _new(self, arr: np.ndarray) -> "ModPoly":
        out = ModPoly.__new__(ModPoly)
        out.p = self.p
        out.c = _trim(arr)
        return out

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return int(self.c[-1]) if len(self.c) else 0

    def __bool__(self) -> bool:
        return len(self.c) > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModPoly):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.c, other.c)

    def __hash__(self) -> int:
        return hash((self.p, self.c.tobytes()))

    def __repr__(self) -> str:
        return f"ModPoly({self.c.tolist()}, p={self.p})"

    def coeffs(self) -> list[int]:
        return [int(v) for v in self.c]

    def __add__(self, other: "ModPoly") -> "ModPoly":
        n = max(len(self.c), len(other.c))
        out = np.zeros(n, dtype=np.int64)
        out[: len(self.c)] += self.c
        out[: len(other.c)] += other.c
        return self._new(out % self.p)

    def __neg__(self) -> "ModPoly":
        return self._new((-self.c) % self.p)

    def __sub__(self, other: "ModPoly") -> "ModPoly":
        return self + (-other)

    def __mul__(self, other: "ModPoly | int") -> "ModPoly":
        if isinstance(other, (int, np.integer)):
            return self._new((self.c * (int(other) % self.p)) % self.p)
        return self._new(mul_modp(self.c, other.c, self.p))

    def monic(self) -> "ModPoly":
        if not self:
            return self
        return self * pow(self.lc, -1, self.p)

    def __divmod__(self, other: "ModPoly") -> tuple["ModPoly", "ModPoly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        db = other.degree
        rem = self.c.copy()
        if len(rem) <= db:
            return self._new(rem[:0]), self._new(rem)
        inv = pow(other.lc, -1, p)
        b = other.c
        quot = np.zeros(len(rem) - db, dtype=np.int64)
        for k in range(len(rem) - 1, db - 1, -1):
            ck = int(rem[k])
            if ck == 0:
                continue
            q = ck * inv % p
            quot[k - db] = q
            seg = rem[k - db : k + 1]
            seg -= (q * b) % p
            seg %= p
        return self._new(quot), self._new(rem[:db])

    def __mod__(self, other: "ModPoly") -> "ModPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "ModPoly") -> "ModPoly":
        return divmod(self, other)[0]

    def derivative(self) -> "ModPoly":
        if len(self.c) <= 1:
            return self._new(self.c[:0])
        k = np.arange(1, len(self.c), dtype=np.int64) % self.p
        return self._new((self.c[1:] * k) % self.p)

    def __call__(self, x: int) -> int:
        acc = 0
        for v in reversed(self.coeffs()):
            acc = (acc * x + v) % self.p
        return acc

    def powmod(self, e: int, mod: "ModPoly") -> "ModPoly":
        out = self._new(np.ones(1, dtype=np.int64))
        base = self % mod
        while e:
            if e & 1:
                out = (out * base) % mod
            e >>= 1
            if e:
                base = (base * base) % mod
        return out


def mod_gcd(a: ModPoly, b: ModPoly) -> ModPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def _x(p: int) -> ModPoly:
    return ModPoly([0, 1], p)


def _frobenius_matrix(f: ModPoly) -> np.ndarray:
    """Columns are x^(p*k) mod f for k < deg f."""
    n = f.degree
    p = f.p
    xp = _x(p).powmod(p, f)
    cols = np.zeros((n, n), dtype=np.int64)
    cur = ModPoly([1], p)
    for k in range(n):
        cols[: len(cur.c), k] = cur.c
        cur = (cur * xp) % f
    return cols


def _matvec(mat: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    lo = v & 0xFFFF
    hi = v >> 16
    r = (mat @ lo) % p
    r = (r + ((mat @ hi) % p) * 65536) % p
    return r


def _apply_frobenius(mat: np.ndarray, g: ModPoly) -> ModPoly:
    n = mat.shape[0]
    v = np.zeros(n, dtype=np.int64)
    v[: len(g.c)] = g.c
    return g._new(_matvec(mat, v, g.p))


def squarefree_decomposition(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Monic squarefree factors with multiplicities (Yun, with p-th roots)."""
    p = f.p
    f = f.monic()
    out: list[tuple[ModPoly, int]] = []
    if f.degree < 1:
        return out
    d = f.derivative()
    if not d:
        # f is a p-th power
        root = ModPoly(f.c[::p], p)
        return [(g, m * p) for g, m in squarefree_decomposition(root)]
    c = mod_gcd(f, d)
    w = f // c
    i = 1
    while w.degree > 0:
        y = mod_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        root = ModPoly(c.c[::p], p)
        out.extend((g, m * p) for g, m in squarefree_decomposition(root))
    merged: dict[bytes, tuple[ModPoly, int]] = {}
    for g, m in out:
        key = g.c.tobytes() + m.to_bytes(4, "little")
        merged[key] = (g, m)
    return list(merged.values())


def distinct_degree(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Split a monic squarefree f into products of equal-degree factors."""
    p = f.p
    out = []
    g = f.monic()
    if g.degree < 1:
        return out
    mat = _frobenius_matrix(g)
    x = _x(p)
    h = x
    i = 0
    while g.degree >= 2 * (i + 1):
        i += 1
        h = _apply_frobenius(mat, h % g) if h.degree >= 0 else h
        part = mod_gcd(g, h - x)
        if part.degree > 0:
            out.append((part, i))
            g = g // part
            h = h % g
            if g.degree > 0:
                mat = _frobenius_matrix(g)
    if g.degree > 0:
        out.append((g.monic(), g.degree))
    return out


def _equal_degree(f: ModPoly, d: int, rng: random.Random) -> list[ModPoly]:
    p = f.p
    if f.degree == d:
        return [f]
    mat = _frobenius_matrix(f)
    while True:
        a = ModPoly([rng.randrange(p) for _ in range(f.degree)], p)
        if a.degree < 1:
            continue
        # norm-like element a * a^p * ... * a^(p^(d-1)), then the (p-1)/2 power
        t, b = a % f, a % f
        for _ in range(d - 1):
            b = _apply_frobenius(mat, b)
            t = (t * b) % f
        t = t.powmod((p - 1) // 2, f)
        g = mod_gcd(f, t - ModPoly([1], p))
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor_mod_p(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Irreducible monic factors with multiplicities, sorted canonically."""
    if f.p == 2:
        raise ValueError("factorization mod 2 is not supported")
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(f.p * 1000003 + f.degree)
    out = []
    for g, m in squarefree_decomposition(f):
        for part, d in distinct_degree(g):
            for irr in _equal_degree(part, d, rng):
                out.append((irr.monic(), m))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs(), t[1]))
    return out


def is_squarefree(f: ModPoly) -> bool:
    return mod_gcd(f, f.derivative()).degree == 0


def degree_pattern(f: ModPoly) -> list[int]:
    """Degrees of the irreducible factors of a squarefree f, with repeats."""
    degs = []
    for part, d in distinct_degree(f):
        degs.extend([d] * (part.degree // d))
    return sorted(degs)
