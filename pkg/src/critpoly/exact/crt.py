"""Chinese remaindering, rational reconstruction and the prime pool."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import gmpy2

PRIME_LO = 1 << 30
PRIME_HI = 1 << 31
DEFAULT_SEED = 20240601


def crt_reconstruct(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Symmetric representative of the CRT solution.

    >>> crt_reconstruct([2, 3], [3, 5])
    -7
    """
    if len(residues) != len(moduli):
        raise ValueError("residues and moduli differ in length")
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        r %= p
        t = ((r - x) * int(gmpy2.invert(m % p, p))) % p
        x += m * t
        m *= p
    return x - m if 2 * x > m else x


class CRTAccumulator:
    """Incremental CRT over a vector of residues (Garner style)."""

    def __init__(self, length: int):
        self.values = [0] * length
        self.modulus = 1

    def add(self, residues: Iterable[int], p: int) -> None:
        m = self.modulus
        inv = int(gmpy2.invert(m % p, p))
        vals = self.values
        for i, r in enumerate(residues):
            x = vals[i]
            t = ((int(r) - x) * inv) % p
            vals[i] = x + m * t
        self.modulus = m * p

    def symmetric(self) -> list[int]:
        m = self.modulus
        return [v - m if 2 * v > m else v for v in self.values]


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Find n/d with |n|, d <= sqrt(m/2) and n = a*d mod m, or None.

    >>> rational_reconstruct(3336, 10007)
    Fraction(1, 3)
    """
    if m <= 0:
        raise ValueError("modulus must be positive")
    a %= m
    bound = gmpy2.isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gmpy2.gcd(t1, m) != 1:
        return None
    return Fraction(int(r1), int(t1))


def lift(values: Sequence[int], modulus: int) -> list[Fraction] | None:
    """Lift residues to rationals; integers via the symmetric range first."""
    out = []
    half_bound = gmpy2.isqrt(modulus // 2)
    for v in values:
        v %= modulus
        s = v - modulus if 2 * v > modulus else v
        if abs(s) <= half_bound:
            out.append(Fraction(int(s)))
            continue
        q = rational_reconstruct(v, modulus)
        if q is None:
            return None
        out.append(q)
    return out


@lru_cache(maxsize=8)
def _pool(seed: int, count: int) -> tuple[int, ...]:
    rng = random.Random(seed)
    seen: set[int] = set()
    out = []
    while len(out) < count:
        c = rng.randrange(PRIME_LO, PRIME_HI) | 1
        if c not in seen and gmpy2.is_prime(c, 40):
            seen.add(c)
            out.append(c)
    return tuple(out)


def prime_pool(count: int, seed: int = DEFAULT_SEED) -> list[int]:
    """Deterministic list of distinct primes in [2**30, 2**31)."""
    size = 64
    while size < count:
        size *= 2
    return list(_pool(seed, size)[:count])


def primes_from(seed: int = DEFAULT_SEED):
    """Endless deterministic prime stream, consistent with prime_pool."""
    k = 0
    size = 64
    while True:
        pool = _pool(seed, size)
        while k < len(pool):
            yield pool[k]
            k += 1
        size *= 2
