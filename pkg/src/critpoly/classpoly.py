"""Hilbert class polynomials from reduced forms and a high-precision j.

j(tau) is summed from the integral q-expansion of j.  The tail after K
terms is bounded using c(n) <= exp(4 pi sqrt(n)) / sqrt(2) n^(-3/4) and
|q| = exp(-pi sqrt|d| / a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import mpmath

from .config import atomic_write, cache_dir
from .exact.intpoly import IntPoly
from .qseries import j_series

DEFAULT_MAX_BITS = 1_000_000


class ClassPolyError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


def _check_disc(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise ClassPolyError(f"{d} is not a negative discriminant")


def reduced_forms(d: int) -> list[ReducedForm]:
    """Primitive reduced forms of discriminant d, one per class.

    >>> reduced_forms(-4)
    [ReducedForm(a=1, b=0, c=1)]
    """
    _check_disc(d)
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            out.append(ReducedForm(a, b, c))
        a += 1
    out.sort()
    return out


def class_number(d: int) -> int:
    return len(reduced_forms(d))


@lru_cache(maxsize=4)
def _j_coeffs(K: int) -> list[int]:
    return j_series(K).int_coeffs(-1, K)


def _terms_needed(a_max: int, d: int, bits: int) -> int:
    # smallest K with tail sum_{n>=K} e^{4 pi sqrt n} |q|^n below 2^-bits
    r = math.pi * math.sqrt(-d) / a_max
    target = bits * math.log(2) + 40
    K = 8
    while True:
        expo = 4 * math.pi * math.sqrt(K) - r * K
        ratio = 2 * math.pi / math.sqrt(K) - r  # derivative of the exponent
        if ratio < 0 and -expo > target + math.log(1 + 1 / -ratio):
            return K
        K = int(K * 1.25) + 1


def j_value(a: int, b: int, d: int, prec_bits: int):
    """j((-b + sqrt d) / 2a) to roughly ``prec_bits`` bits."""
    with mpmath.workprec(prec_bits + 64):
        tau = mpmath.mpc(-b, mpmath.sqrt(-d)) / (2 * a)
        q = mpmath.exp(2j * mpmath.pi * tau)
        K = _terms_needed(a, d, prec_bits)
        coeffs = _j_coeffs(_round_up(K))[: K + 1]
        acc = mpmath.mpc(0)
        for c in reversed(coeffs[1:]):
            acc = acc * q + c
        return acc + coeffs[0] / q


def _round_up(K: int) -> int:
    return 1 << max(6, (K - 1).bit_length())


def _precision_bits(forms: list[ReducedForm], d: int) -> int:
    s = sum(1 / f.a for f in forms)
    return int(math.pi * math.sqrt(-d) * s / math.log(2)) + 32 * len(forms) + 64


def _evaluate(d: int, bits: int) -> tuple[IntPoly, float]:
    forms = reduced_forms(d)
    with mpmath.workprec(bits + 64):
        roots = []
        seen = set()
        for f in forms:
            if (f.a, f.b, f.c) in seen:
                continue
            z = j_value(f.a, f.b, d, bits)
            conj = ReducedForm(f.a, -f.b, f.c)
            if f.b != 0 and conj in forms and conj != f:
                roots.extend([z, mpmath.conj(z)])
                seen.add((conj.a, conj.b, conj.c))
            else:
                roots.append(mpmath.mpc(z.real, 0))
            seen.add((f.a, f.b, f.c))
        poly = [mpmath.mpc(1)]
        for z in roots:
            nxt = [mpmath.mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] += c
                nxt[i] -= z * c
            poly = nxt
        ints = []
        worst = 0.0
        for c in poly:
            n = int(mpmath.nint(c.real))
            dist = abs(c - n)
            worst = max(worst, float(dist))
            ints.append(n)
            if dist >= 0.25:
                return IntPoly(ints), float("inf")
    return IntPoly(ints), worst


def _cache_path(d: int) -> Path:
    return cache_dir() / "hilbert" / f"{d}.txt"


def _read_cache(d: int) -> IntPoly | None:
    path = _cache_path(d)
    if not path.exists():
        return None
    lines = path.read_text().split()
    if len(lines) < 2 or int(lines[0]) != d:
        return None
    deg = int(lines[1])
    coeffs = [int(x) for x in lines[2:]]
    if len(coeffs) != deg + 1:
        return None
    return IntPoly(coeffs)


def _write_cache(d: int, H: IntPoly) -> None:
    body = f"{d} {H.degree}\n" + "\n".join(str(c) for c in H.int_coeffs()) + "\n"
    atomic_write(_cache_path(d), body)


@lru_cache(maxsize=512)
def _hilbert_uncached(d: int, max_bits: int, extra_bits: int = 0) -> IntPoly:
    forms = reduced_forms(d)
    bits = _precision_bits(forms, d) + extra_bits
    while bits <= max_bits:
        H, worst = _evaluate(d, bits)
        if worst < 0.25:
            return H
        bits *= 2
    raise ClassPolyError(f"precision ceiling {max_bits} bits exceeded for d={d}")


def hilbert_class_poly(d: int, *, use_cache: bool = True, max_bits: int = DEFAULT_MAX_BITS) -> IntPoly:
    """H_d as a monic integer polynomial.

    >>> str(hilbert_class_poly(-4, use_cache=False))
    'x - 1728'
    """
    _check_disc(d)
    if use_cache:
        H = _read_cache(d)
        if H is not None:
            return H
    H = _hilbert_uncached(d, max_bits)
    if use_cache:
        _write_cache(d, H)
    return H


def hilbert_class_poly_at(d: int, bits: int) -> IntPoly:
    """H_d evaluated at an explicit working precision (no cache)."""
    _check_disc(d)
    H, worst = _evaluate(d, bits)
    if worst >= 0.25:
        raise ClassPolyError(f"rounding failed at {bits} bits for d={d}")
    return H


def root_residuals(d: int, H: IntPoly | None = None) -> list[float]:
    """|H(z)| / sum |c_i| |z|^i at z = j(tau_f) for every reduced form f."""
    forms = reduced_forms(d)
    bits = _precision_bits(forms, d)
    H = H or hilbert_class_poly(d, use_cache=False)
    out = []
    with mpmath.workprec(bits + 64):
        coeffs = [mpmath.mpf(c) for c in H.int_coeffs()]
        for f in forms:
            z = j_value(f.a, f.b, d, bits)
            acc, size = mpmath.mpc(0), mpmath.mpf(0)
            az = max(abs(z), 1)
            for c in reversed(coeffs):
                acc = acc * z + c
                size = size * az + abs(c)
            out.append(float(abs(acc) / size))
    return out
