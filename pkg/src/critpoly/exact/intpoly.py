"""Dense univariate polynomials over Q."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .fastmul import mul_int

Number = int | Fraction


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class IntPoly:
    """Immutable polynomial with rational coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def x(cls) -> "IntPoly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "IntPoly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "IntPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-r, 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = IntPoly([other])
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({self})"

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    def is_monic(self) -> bool:
        return self.lc == 1

    def __neg__(self) -> "IntPoly":
        return IntPoly([-c for c in self.coeffs])

    def __add__(self, other: "IntPoly | Number") -> "IntPoly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other: "IntPoly | Number") -> "IntPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Number) -> "IntPoly":
        return _coerce(other) - self

    def __mul__(self, other: "IntPoly | Number") -> "IntPoly":
        if isinstance(other, (int, Fraction)):
            return IntPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        da = lcm(*(c.denominator for c in self.coeffs))
        db = lcm(*(c.denominator for c in other.coeffs))
        a = [(c * da).numerator for c in self.coeffs]
        b = [(c * db).numerator for c in other.coeffs]
        prod = mul_int(a, b)
        den = da * db
        return IntPoly([Fraction(c, den) for c in prod])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        if k < 0:
            raise ValueError("negative power")
        out, base = IntPoly([1]), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __divmod__(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc
        quot = [Fraction(0)] * max(0, len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c * inv
            quot[k - db] = q
            for i, oc in enumerate(other.coeffs):
                if oc:
                    rem[k - db + i] -= q * oc
        return IntPoly(quot), IntPoly(rem[:db] if db > 0 else [])

    def __floordiv__(self, other: "IntPoly") -> "IntPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "IntPoly") -> "IntPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"inexact division, remainder of degree {r.degree}")
        return q

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "IntPoly":
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return IntPoly([c * inv for c in self.coeffs])

    def reverse(self) -> "IntPoly":
        """x^deg * p(1/x)."""
        return IntPoly(reversed(self.coeffs))

    def valuation(self) -> int:
        """Multiplicity of the root 0 (-1 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x^k; negative k must divide exactly."""
        if k >= 0:
            return IntPoly([0] * k + list(self.coeffs))
        if any(self.coeffs[: -k]):
            raise ArithmeticError(f"x^{-k} does not divide the polynomial")
        return IntPoly(self.coeffs[-k:])

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive integral."""
        if not self.coeffs:
            return Fraction(0)
        den = lcm(*(c.denominator for c in self.coeffs))
        g = 0
        for c in self.coeffs:
            g = gcd(g, (c * den).numerator)
        return Fraction(g, den)

    def primitive(self) -> "IntPoly":
        c = self.content()
        if self.lc < 0:
            c = -c
        return self * (1 / c) if c else self


def _coerce(v: "IntPoly | Number") -> IntPoly:
    return v if isinstance(v, IntPoly) else IntPoly([v])


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Monic gcd over Q; gcd(a, 0) = monic(a)."""
    while b:
        a, b = b, (a % b).primitive()
    return a.monic()


def format_poly(coeffs: Sequence[Fraction], var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def parse_poly(text: str, var: str = "x") -> IntPoly:
    """Inverse of ``format_poly`` for the formats it emits."""
    s = text.replace(" ", "")
    if s == "0":
        return IntPoly()
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, Fraction] = {}
    i = 0
    while i < len(s):
        sign = -1 if s[i] == "-" else 1
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        term = s[i + 1 : j]
        i = j
        if var in term:
            coef_part, _, mono = term.partition(var)
            coef = Fraction(coef_part.rstrip("*")) if coef_part else Fraction(1)
            k = int(mono[1:]) if mono.startswith("^") else 1
        else:
            coef, k = Fraction(term), 0
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * coef
    top = max(coeffs) if coeffs else -1
    return IntPoly([coeffs.get(k, 0) for k in range(top + 1)])
