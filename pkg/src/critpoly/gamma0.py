"""Invariants of X_0(N): index, elliptic points, cusps, genus."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import divisors, factorint, totient


@dataclass(frozen=True)
class CuspClass:
    """Cusp a/d of X_0(N); ``count`` is the number of cusps sharing d."""

    denominator: int
    numerator: int
    width: int
    count: int
    level: int

    @property
    def label(self) -> str:
        return format_cusp(self.numerator, self.denominator, self.level)

    @property
    def is_infinity(self) -> bool:
        return self.denominator == self.level


def format_cusp(a: int, d: int, N: int) -> str:
    if d == N:
        return "[∞]"
    if d == 1:
        return "[0]"
    return f"[{a}/{d}]"


@dataclass(frozen=True)
class LevelInvariants:
    N: int
    d_N: int
    eps2: int
    eps3: int
    cusps: tuple[CuspClass, ...]
    c_N: int
    genus: int

    def cusp(self, a: int, d: int) -> CuspClass:
        for c in self.cusps:
            if c.denominator == d and c.numerator == a:
                return c
        raise KeyError(f"no cusp {a}/{d} on X_0({self.N})")

    @property
    def infinity(self) -> CuspClass:
        return self.cusp(1, self.N) if self.N > 1 else self.cusps[0]


def _kron_minus1(p: int) -> int:
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _kron_minus3(p: int) -> int:
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def cusp_representatives(N: int, d: int) -> list[int]:
    """Numerators a of the cusps a/d, one per class, lifted coprime to d."""
    g = gcd(d, N // d)
    out = []
    for a in range(g):
        if gcd(a, g) != 1:
            continue
        if d == 1:
            out.append(0)
            continue
        b = a if a else g
        while gcd(b, d) != 1:
            b += g
        out.append(b)
    return out


@lru_cache(maxsize=4096)
def invariants(N: int) -> LevelInvariants:
    """Index, elliptic point counts, cusps and genus of X_0(N).

    >>> invariants(37).genus
    2
    """
    if N < 1:
        raise ValueError("level must be positive")
    primes = list(factorint(N))
    d_N = N
    for p in primes:
        d_N = d_N // p * (p + 1)
    eps2 = 0
    if N % 4:
        eps2 = 1
        for p in primes:
            eps2 *= 1 + _kron_minus1(p)
    eps3 = 0
    if N % 9:
        eps3 = 1
        for p in primes:
            eps3 *= 1 + _kron_minus3(p)
    cusps = []
    for d in divisors(N):
        cnt = int(totient(gcd(d, N // d)))
        w = N // gcd(d * d, N)
        for a in cusp_representatives(N, d):
            cusps.append(CuspClass(d, a, w, cnt, N))
    c_N = len(cusps)
    g = 1 + Fraction(d_N, 12) - Fraction(eps2, 4) - Fraction(eps3, 3) - Fraction(c_N, 2)
    if g.denominator != 1 or g < 0:
        raise ArithmeticError(f"genus formula gave {g} for N={N}")
    return LevelInvariants(N, d_N, eps2, eps3, tuple(cusps), c_N, int(g))
