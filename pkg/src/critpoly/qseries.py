"""Truncated Laurent series in q with exact rational coefficients.

A series stores integer numerators over one common denominator, which
keeps products on the fast integer Kronecker path.  ``prec`` is absolute:
coefficients of q^k are known for ``valuation <= k < prec``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .exact.fastmul import mul_int

Number = int | Fraction


class LaurentSeries:
    """Immutable truncated Laurent series."""

    __slots__ = ("valuation", "prec", "num", "den")

    def __init__(
        self,
        coeffs: Iterable[Number] = (),
        valuation: int = 0,
        prec: int | None = None,
    ):
        fr = [Fraction(c) for c in coeffs]
        if prec is None:
            prec = valuation + len(fr)
        fr = fr[: max(0, prec - valuation)]
        den = lcm(*(c.denominator for c in fr)) if fr else 1
        self._set(valuation, prec, [(c * den).numerator for c in fr], den)

    def _set(self, v: int, prec: int, num: list[int], den: int) -> None:
        k = 0
        while k < len(num) and num[k] == 0:
            k += 1
        num = num[k:]
        v += k
        if not num:
            v = prec
            den = 1
        else:
            g = den
            for c in num:
                g = gcd(g, c)
                if g == 1:
                    break
            if g > 1:
                num = [c // g for c in num]
                den //= g
        self.valuation = v
        self.prec = prec
        self.num = tuple(num)
        self.den = den

    @classmethod
    def _raw(cls, v: int, prec: int, num: Sequence[int], den: int = 1) -> "LaurentSeries":
        out = cls.__new__(cls)
        out._set(v, prec, list(num[: max(0, prec - v)]), den)
        return out

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], valuation: int = 0, prec: int | None = None):
        if prec is None:
            prec = valuation + len(coeffs)
        return cls._raw(valuation, prec, [int(c) for c in coeffs])

    @classmethod
    def one(cls, prec: int) -> "LaurentSeries":
        return cls._raw(0, prec, [1])

    @classmethod
    def monomial(cls, k: int, prec: int, c: Number = 1) -> "LaurentSeries":
        return cls([c], valuation=k, prec=prec)

    # -- access -------------------------------------------------------------
    @property
    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def __getitem__(self, k: int) -> Fraction:
        if k >= self.prec:
            raise IndexError(f"q^{k} is beyond precision {self.prec}")
        i = k - self.valuation
        if i < 0 or i >= len(self.num):
            return Fraction(0)
        return Fraction(self.num[i], self.den)

    def dense(self, start: int, stop: int) -> list[Fraction]:
        return [self[k] for k in range(start, stop)]

    def int_coeffs(self, start: int, stop: int) -> list[int]:
        if self.den != 1:
            raise ValueError("series has non-integral coefficients")
        if stop > self.prec:
            raise IndexError(f"q^{stop - 1} is beyond precision {self.prec}")
        out = [0] * (stop - start)
        v = self.valuation
        for k in range(max(start, v), min(stop, v + len(self.num))):
            out[k - start] = self.num[k - v]
        return out

    def is_zero(self) -> bool:
        return not self.num

    def is_integral(self) -> bool:
        return self.den == 1

    @property
    def leading(self) -> Fraction:
        if not self.num:
            raise ValueError("series is zero to precision")
        return Fraction(self.num[0], self.den)

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.num[:6]):
            if c:
                terms.append(f"{Fraction(c, self.den)}*q^{self.valuation + i}")
        return "LaurentSeries(" + " + ".join(terms) + f" + O(q^{self.prec}))"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.valuation, self.prec, self.num, self.den) == (
            other.valuation,
            other.prec,
            other.num,
            other.den,
        )

    def __hash__(self) -> int:
        return hash((self.valuation, self.prec, self.num, self.den))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality on the common precision range."""
        p = min(self.prec, other.prec)
        return self.truncate(p) == other.truncate(p)

    # -- arithmetic -----------------------------------------------------------
    def truncate(self, prec: int) -> "LaurentSeries":
        if prec > self.prec:
            raise ValueError("cannot extend precision")
        return LaurentSeries._raw(self.valuation, prec, self.num, self.den)

    def _aligned(self, start: int, stop: int, den: int) -> list[int]:
        f = den // self.den
        out = [0] * (stop - start)
        v = self.valuation
        for i, c in enumerate(self.num):
            k = v + i
            if start <= k < stop:
                out[k - start] = c * f
        return out

    def __add__(self, other: "LaurentSeries | Number") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries([other], 0, self.prec)
        prec = min(self.prec, other.prec)
        v = min(self.valuation, other.valuation, prec)
        den = lcm(self.den, other.den)
        a = self._aligned(v, prec, den)
        b = other._aligned(v, prec, den)
        return LaurentSeries._raw(v, prec, [x + y for x, y in zip(a, b)], den)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries._raw(self.valuation, self.prec, [-c for c in self.num], self.den)

    def __sub__(self, other: "LaurentSeries | Number") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries([other], 0, self.prec)
        return self + (-other)

    def __rsub__(self, other: Number) -> "LaurentSeries":
        return (-self) + other

    def scale(self, c: Number) -> "LaurentSeries":
        c = Fraction(c)
        return LaurentSeries._raw(
            self.valuation, self.prec, [x * c.numerator for x in self.num], self.den * c.denominator
        ) if c else LaurentSeries._raw(self.prec, self.prec, [])

    def __mul__(self, other: "LaurentSeries | Number") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        v = self.valuation + other.valuation
        prec = min(self.valuation + other.prec, other.valuation + self.prec)
        n = max(0, prec - v)
        prod = mul_int(list(self.num[:n]), list(other.num[:n]))[:n]
        return LaurentSeries._raw(v, prec, prod, self.den * other.den)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by q^k."""
        return LaurentSeries._raw(self.valuation + k, self.prec + k, self.num, self.den)

    def inverse(self) -> "LaurentSeries":
        if not self.num:
            raise ZeroDivisionError("series is zero to precision")
        v = self.valuation
        rel = self.prec - v
        # unit part u = s / q^v, relative precision rel
        u = LaurentSeries._raw(0, rel, self.num, self.den)
        lead = Fraction(self.num[0], self.den)
        x = LaurentSeries([1 / lead], 0, 1)
        cur = 1
        while cur < rel:
            cur = min(2 * cur, rel)
            ut = u.truncate(cur)
            xx = LaurentSeries._raw(0, cur, x.num, x.den) if x.valuation == 0 else x._extend(cur)
            e = (ut * xx).truncate(cur)
            x = (xx * (2 - e)).truncate(cur)
        return x.shift(-v)

    def _extend(self, prec: int) -> "LaurentSeries":
        # reinterpret a lower-precision approximation at higher precision (Newton seed)
        return LaurentSeries._raw(self.valuation, prec, self.num, self.den)

    def __truediv__(self, other: "LaurentSeries | Number") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            rel = self.prec - self.valuation
            return LaurentSeries.one(rel)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def dilate(self, d: int) -> "LaurentSeries":
        """Substitute q -> q^d."""
        num = [0] * ((len(self.num) - 1) * d + 1) if self.num else []
        for i, c in enumerate(self.num):
            num[i * d] = c
        return LaurentSeries._raw(self.valuation * d, self.prec * d, num, self.den) if self.num else \
            LaurentSeries._raw(self.prec * d, self.prec * d, [])

    def derivative(self) -> "LaurentSeries":
        """q * d/dq."""
        v = self.valuation
        return LaurentSeries._raw(v, self.prec, [(v + i) * c for i, c in enumerate(self.num)], self.den)

    def mod_coeffs(self, p: int, start: int, stop: int) -> np.ndarray:
        """Coefficients of q^start .. q^(stop-1) reduced mod p."""
        if stop > self.prec:
            raise IndexError(f"q^{stop - 1} is beyond precision {self.prec}")
        if self.den % p == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        dinv = pow(self.den, -1, p)
        out = np.zeros(stop - start, dtype=np.int64)
        v = self.valuation
        lo, hi = max(start, v), min(stop, v + len(self.num))
        if lo < hi:
            out[lo - start : hi - start] = [c * dinv % p for c in self.num[lo - v : hi - v]]
        return out


def q_derivative(s: LaurentSeries) -> LaurentSeries:
    return s.derivative()


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_inv(s: LaurentSeries) -> LaurentSeries:
    return s.inverse()


def series_pow(s: LaurentSeries, k: int) -> LaurentSeries:
    return s**k


# -- classical constructors ---------------------------------------------------


def pentagonal_coeffs(n: int) -> list[int]:
    """Coefficients of prod_{k>=1}(1 - q^k) below q^n (Euler)."""
    out = [0] * n
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= n:
            break
        out[e1] += sign
        if k and e2 < n:
            out[e2] += sign
        k += 1
    return out


def eta_series(prec: int) -> LaurentSeries:
    """prod (1 - q^n) to precision ``prec``; the q^(1/24) is tracked by callers."""
    if prec < 1:
        raise ValueError("prec must be positive")
    return LaurentSeries.from_ints(pentagonal_coeffs(prec), 0, prec)


def sigma_table(n: int, k: int) -> np.ndarray:
    """sigma_k(m) for m < n as Python ints in an object array."""
    out = np.zeros(n, dtype=object)
    out[:] = 0
    for d in range(1, n):
        dk = d**k
        out[d::d] += dk
    return out


def e4_series(prec: int) -> LaurentSeries:
    s = sigma_table(prec, 3)
    return LaurentSeries.from_ints([1] + [240 * int(s[m]) for m in range(1, prec)], 0, prec)


def delta_series(prec: int) -> LaurentSeries:
    """q * prod(1 - q^n)^24."""
    return (eta_series(prec - 1) ** 24).shift(1) if prec > 1 else LaurentSeries._raw(1, prec, [])


def j_series(prec: int) -> LaurentSeries:
    """j = E4^3 / Delta, coefficients below q^prec."""
    n = prec + 1
    e4 = e4_series(n)
    d = eta_series(n) ** 24
    return (e4**3 * d.inverse()).shift(-1)


def u_series(prec: int) -> LaurentSeries:
    """u = 1/j, coefficients below q^prec."""
    return j_series(prec - 2).inverse()
