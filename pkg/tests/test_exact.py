import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from critpoly.exact import (
    CRTAccumulator,
    IntPoly,
    ModPoly,
    crt_reconstruct,
    degree_pattern,
    factor_mod_p,
    format_poly,
    lift,
    parse_poly,
    poly_gcd,
    prime_pool,
    rational_reconstruct,
    squarefree_decomposition,
)
from critpoly.exact.fastmul import mul_int, mul_modp

P = 2147483647
ints = st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=40)
small_polys = st.lists(st.integers(-50, 50), min_size=1, max_size=8).map(IntPoly)


def naive(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@given(ints, ints)
def test_mul_int_matches_schoolbook(a, b):
    assert list(mul_int(a, b)) == naive(a, b)


@given(st.lists(st.integers(0, P - 1), min_size=1, max_size=300), st.lists(st.integers(0, P - 1), min_size=1, max_size=300))
def test_mul_modp_matches_schoolbook(a, b):
    got = mul_modp(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64), P)
    want = [c % P for c in naive(a, b)]
    assert got.tolist() == want


def test_mul_modp_truncates():
    a = np.arange(1, 101, dtype=np.int64)
    got = mul_modp(a, a, P, 10)
    assert got.tolist() == [c % P for c in naive(list(range(1, 101)), list(range(1, 101)))[:10]]


def test_crt_symmetric():
    assert crt_reconstruct([2, 3], [3, 5]) == -7
    with pytest.raises(ValueError):
        crt_reconstruct([1], [3, 5])


@given(st.lists(st.integers(-(10**40), 10**40), min_size=1, max_size=6))
def test_crt_accumulator_roundtrip(vals):
    acc = CRTAccumulator(len(vals))
    for p in prime_pool(6):
        acc.add([v % p for v in vals], p)
    assert acc.symmetric() == vals
    bound = math.isqrt(acc.modulus // 2)
    if all(abs(v) <= bound for v in vals):
        assert lift(acc.values, acc.modulus) == [Fraction(v) for v in vals]


@given(st.integers(-1000, 1000), st.integers(1, 1000))
def test_rational_reconstruct(n, d):
    m = prime_pool(2)[0] * prime_pool(2)[1]
    a = n * pow(d, -1, m) % m
    assert rational_reconstruct(a, m) == Fraction(n, d)


def test_rational_reconstruct_fails_cleanly():
    assert rational_reconstruct(5, 11) is None or isinstance(rational_reconstruct(5, 11), Fraction)


def test_prime_pool_is_deterministic_and_in_range():
    a, b = prime_pool(20, seed=1), prime_pool(20, seed=1)
    assert a == b and len(set(a)) == 20
    assert all((1 << 30) <= p < (1 << 31) for p in a)
    assert prime_pool(5, seed=2) != a[:5]


@given(small_polys, small_polys)
def test_divmod_identity(a, b):
    if not b:
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(small_polys, small_polys, small_polys)
def test_gcd_finds_common_factor(a, b, c):
    if not c or c.degree < 1 or not a or not b:
        return
    g = poly_gcd(a * c, b * c)
    assert (a * c) % g == IntPoly() and (b * c) % g == IntPoly()
    assert (g % c.monic()) == IntPoly() or g.degree >= c.degree


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        IntPoly([1, 0, 1]).exact_div(IntPoly([1, 1]))


@given(small_polys)
def test_format_parse_roundtrip(f):
    assert parse_poly(format_poly(f.coeffs)) == f


def test_format_examples():
    assert format_poly([Fraction(5), Fraction(-1728), Fraction(1)]) == "x^2 - 1728*x + 5"
    assert format_poly([]) == "0"
    assert str(IntPoly([-1728, 1])) == "x - 1728"


def test_shift_and_reverse():
    f = IntPoly([0, 0, 3, 1])
    assert f.valuation() == 2
    assert f.shift(-2) == IntPoly([3, 1])
    assert f.reverse() == IntPoly([1, 3])
    with pytest.raises(ArithmeticError):
        f.shift(-3)


def test_factor_mod_p_examples():
    p = 1000003
    f = ModPoly([1, 0, 1], p) * ModPoly([2, 0, 1], p) * ModPoly([-1, 1], p) * ModPoly([-1, 1], p)
    fac = factor_mod_p(f)
    prod = ModPoly([1], p)
    for g, e in fac:
        for _ in range(e):
            prod = prod * g
    assert prod == f.monic()
    assert sorted(e for _, e in fac if _.degree == 1 and _(1) == 0) == [2]


@given(st.lists(st.integers(0, 96), min_size=2, max_size=12))
def test_factor_mod_p_multiplies_back(coeffs):
    p = 97
    f = ModPoly(coeffs, p)
    if f.degree < 1:
        return
    prod = ModPoly([1], p)
    for g, e in factor_mod_p(f):
        assert g.lc == 1
        for _ in range(e):
            prod = prod * g
    assert prod == f.monic()


def test_squarefree_decomposition():
    p = 101
    a, b = ModPoly([1, 1], p), ModPoly([3, 0, 1], p)
    parts = dict((e, g) for g, e in squarefree_decomposition(a * b * b * b))
    assert parts[1] == a.monic() and parts[3] == b.monic()


def test_degree_pattern():
    p = 1000003
    f = ModPoly([2, 0, 1], p) * ModPoly([-5, 1], p)  # x^2 + 2 irreducible iff -2 is a non-residue
    pat = degree_pattern(f.monic())
    assert sum(pat) == 3 and pat in ([1, 2], [1, 1, 1])
    with pytest.raises(ValueError):
        factor_mod_p(ModPoly([1, 1], 2))
