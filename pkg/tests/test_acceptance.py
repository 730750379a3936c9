"""Acceptance suite: one group of tests per criterion, summarized at the end of the run."""

from fractions import Fraction
from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from critpoly import PipelineConfig, load_curve
from critpoly import modseries as ms
from critpoly.classpoly import (
    _precision_bits,
    hilbert_class_poly,
    hilbert_class_poly_at,
    reduced_forms,
)
from critpoly.cli import reference_rows
from critpoly.eta import EtaQuotient
from critpoly.exact.intpoly import IntPoly, poly_gcd
from critpoly.gamma0 import invariants
from critpoly.newform import newform_series
from critpoly.pipeline import dense_setup, r_in_u
from critpoly.qseries import j_series, u_series
from critpoly.relations import (
    dense_min_relation,
    min_approximant_mod_p,
    power_rows,
    yang_relation,
    yang_relation_mod_p,
)
from critpoly.report import analyze
from critpoly.verdict import IRREDUCIBLE, certify_irreducible, discriminants, extract_cm_factors

C1 = pytest.mark.criterion(1, "golden curves: F equals products of class polynomials exactly")
C2 = pytest.mark.criterion(2, "67a: degree 8, x^7 coefficient, constant term, irreducible")
C3 = pytest.mark.criterion(3, "level 664: divisor of h2, pole orders (247, 103), genus 81")
C4 = pytest.mark.criterion(4, "extended: 664a degree 160 and 389a H_{-19}^2 * degree 60")
C5 = pytest.mark.criterion(5, "relations vanish to q^M and are stable at M + 50")
C6 = pytest.mark.criterion(6, "class polynomial degree, precision stability, H_-3 and H_-4")
C7 = pytest.mark.criterion(7, "extract-then-remultiply and no false irreducibility claims")
C8 = pytest.mark.criterion(8, "genus/cusp identities for N <= 10000 and eta divisor checks")

P = 2147483647


def product(parts):
    out = IntPoly([1])
    for d, e in parts:
        out = out * hilbert_class_poly(d) ** e
    return out


# -- 1 ------------------------------------------------------------------------------


@C1
@pytest.mark.slow
@pytest.mark.parametrize(
    "label,parts",
    [
        ("37a", [(-148, 1)]),
        ("37b", [(-16, 2)]),
        ("44a", [(-44, 2)]),
        ("48a", []),
        ("89a", [(-356, 1)]),
    ],
)
def test_golden_curve(critical, label, parts):
    F = critical(label).polynomial
    assert F == product(parts)
    assert F.degree <= 2 * invariants(load_curve(label).conductor).genus - 2


# -- 2 ------------------------------------------------------------------------------


@C2
@pytest.mark.slow
def test_67a(critical):
    F = critical("67a").polynomial
    assert F.degree == 8 and F.is_monic()
    assert F[7] == 1467499520383590415545083053760
    assert sympy.factorint(abs(int(F[0]))) == {2: 68, 3: 2, 5: 3, 23: 6, 443: 3, 186145963: 3}
    assert certify_irreducible(F) == IRREDUCIBLE
    assert extract_cm_factors(F, 4 * 67).hilbert == []


# -- 3 ------------------------------------------------------------------------------


@C3
def test_664_divisor_of_h2():
    h2 = EtaQuotient.parse(664, "2:-1,4:1,8:2,166:-1,332:5,664:-6")
    assert h2.ligozat()[0]
    assert h2.divisor().nonzero() == {"[1/332]": 21, "[1/8]": 61, "[1/4]": 21, "[∞]": -103}


@C3
def test_664_pole_orders():
    h1 = EtaQuotient.parse(664, "2:-4,4:6,8:4,332:6,664:-12")
    h2 = EtaQuotient.parse(664, "2:-1,4:1,8:2,166:-1,332:5,664:-6")
    j = j_series(4)
    # r = j (j - 1728) f / (q dj/dq) starts with -1 for every normalized newform
    r = j * (j - 1728) * newform_series(load_curve("37a"), 6) / j.derivative()
    assert r.valuation == 0
    rh1 = r * h1.q_expansion(-240)
    m, n = -rh1.valuation, -h2.q_expansion(-100).valuation
    assert (m, n) == (247, 103) and gcd(m, n) == 1


@C3
def test_664_genus():
    assert invariants(664).genus == 81


# -- 4 ------------------------------------------------------------------------------


@C4
@pytest.mark.extended
@pytest.mark.parametrize("label", ["664a", "389a"])
def test_extended_rows(label):
    row = reference_rows()[label]
    cfg = PipelineConfig()
    if row["function"] != "j":
        cfg.algorithm, cfg.eta_exponents = "yang", row["function"]
    rep = analyze(load_curve(label), cfg)
    assert sorted(rep.factorization.hilbert) == sorted(tuple(x) for x in row["hilbert"])
    assert rep.factorization.cofactor.degree == row["cofactor_degree"]
    for k, v in row.get("coefficients", {}).items():
        assert rep.factorization.cofactor[int(k)] == int(v)
    assert rep.verdict.proved


# -- 5 ------------------------------------------------------------------------------

small_int = st.integers(-9, 9)


@C5
@settings(max_examples=25, deadline=None)
@given(st.lists(small_int, min_size=1, max_size=3), st.lists(small_int, min_size=1, max_size=2))
def test_dense_relation_property(num, den):
    # x = A(u) / B(u) with B(0) = 1: minimal relation B(y) x - A(y)
    assume(any(num))
    A = IntPoly(num)
    B = IntPoly([1] + den)
    assume(poly_gcd(A, B).degree < 1)
    D = max(A.degree, B.degree)
    u = u_series(2 * D + 80)
    x = _eval(A, u) / _eval(B, u)
    M = 2 * D + 1
    rel = dense_min_relation(x, u, 1, D, M=M)
    assert rel.evaluate(x, u).truncate(M).is_zero()
    again = dense_min_relation(x, u, 1, D, M=M + 50)
    assert again.same_up_to_scalar(rel)
    assert again.evaluate(x, u).truncate(M + 50).is_zero()


def _eval(f, s):
    acc = s * 0
    for c in reversed(f.coeffs):
        acc = acc * s + c
    return acc


@C5
@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([(2, 3), (3, 4), (2, 5), (3, 5)]),
    st.lists(small_int, min_size=5, max_size=5),
    st.lists(small_int, min_size=5, max_size=5),
)
def test_yang_relation_property(mn, a, b):
    m, n = mn
    prec = m * n + 60
    j = j_series(prec)
    g = _eval(IntPoly(a[:m] + [1]), j)
    h = _eval(IntPoly(b[:n] + [1]), j)
    rel = yang_relation(g, h)
    assert rel.evaluate(g, h).truncate(1).is_zero()
    L = m * n + 1
    got = yang_relation_mod_p(g.shift(m).mod_coeffs(P, 0, L), h.shift(n).mod_coeffs(P, 0, L), m, n, P)
    again = yang_relation_mod_p(
        g.shift(m).mod_coeffs(P, 0, L + 50), h.shift(n).mod_coeffs(P, 0, L + 50), m, n, P
    )
    want = {ab: int(c) % P for ab, c in rel.terms.items()}
    assert {k: v for k, v in got.items() if v} == want
    assert {k: v for k, v in again.items() if v} == want


@C5
@pytest.mark.slow
def test_pipeline_relation_37a():
    curve = load_curve("37a")
    images = []
    for extra in (0, 50):
        s = dense_setup(curve, PipelineConfig())
        if extra:
            s = dense_setup(curve, PipelineConfig(terms=s.M + extra))
        L = s.M + s.n * s.T
        rows = power_rows(r_in_u(s.an, P, L), s.n, P, L, shift=s.T)
        res = min_approximant_mod_p(rows, P, s.D)
        acc = np.zeros(L, dtype=np.int64)
        for a in range(res.coeffs.shape[0]):
            f = np.zeros(L, dtype=np.int64)
            f[: res.coeffs.shape[1]] = res.coeffs[a]
            acc = (acc + ms.mul(f, rows[a], P, L)) % P
        assert not acc.any()
        c = res.coeffs
        lead = next(int(v) for v in c.ravel()[::-1] if v)
        images.append((c * pow(lead, -1, P)) % P)
    assert np.array_equal(images[0], images[1])


# -- 6 ------------------------------------------------------------------------------


@C6
@pytest.mark.parametrize("d", [-3, -4, -7, -15, -23, -47, -71, -148, -356, -299])
def test_class_polynomial_degree_and_precision(d):
    H = hilbert_class_poly(d)
    assert H.degree == len(reduced_forms(d))
    bits = _precision_bits(reduced_forms(d), d)
    assert hilbert_class_poly_at(d, 2 * bits) == H


@C6
def test_class_polynomial_oracles():
    assert hilbert_class_poly(-3, use_cache=False) == IntPoly([0, 1])
    assert hilbert_class_poly(-4, use_cache=False) == IntPoly([-1728, 1])


# -- 7 ------------------------------------------------------------------------------

DISCS = list(discriminants(48))
monic = st.lists(st.integers(-25, 25), min_size=2, max_size=5).map(lambda c: IntPoly(c[:-1] + [1]))


@C7
@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(st.dictionaries(st.sampled_from(DISCS), st.integers(1, 3), max_size=3), monic)
def test_extract_then_remultiply(parts, cofactor):
    for d in DISCS:
        H = hilbert_class_poly(d)
        assume(cofactor.degree < H.degree or divmod(cofactor, H)[1])
    F = cofactor * product(parts.items())
    fac = extract_cm_factors(F, 48)
    assert fac.expand() == F
    assert dict(fac.hilbert) == parts and fac.cofactor == cofactor


@C7
@settings(max_examples=100, deadline=None)
@given(monic, monic)
def test_composites_not_certified(a, b):
    assert certify_irreducible(a * b) != IRREDUCIBLE


# -- 8 ------------------------------------------------------------------------------


def _expected(N):
    f = sympy.factorint(N)
    d = N
    for p in f:
        d = d * (p + 1) // p
    e2 = 0 if N % 4 == 0 else int(np.prod([1 + sympy.legendre_symbol(-1 % p, p) if p > 2 else 1 for p in f]))
    e3 = 0 if N % 9 == 0 else int(np.prod([1 + _kron3(p) for p in f]))
    c = sum(sympy.totient(gcd(t, N // t)) for t in sympy.divisors(N))
    return d, e2, e3, c


def _kron3(p):
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


@C8
@pytest.mark.slow
def test_level_identities_up_to_10000():
    for N in range(1, 10001):
        I = invariants(N)
        d, e2, e3, c = _expected(N)
        assert (I.d_N, I.eps2, I.eps3, I.c_N) == (d, e2, e3, c), N
        assert sum(k.width for k in I.cusps) == d
        assert all(k.width == N // gcd(k.denominator**2, N) for k in I.cusps)
        g = 1 + Fraction(d, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(c, 2)
        assert g == I.genus >= 0


@st.composite
def admissible_quotient(draw):
    N = draw(st.sampled_from([4, 6, 8, 12, 18, 24, 30, 36, 44, 48, 60, 64, 72, 90]))
    ds = sympy.divisors(N)
    r = {d: draw(st.integers(-3, 3)) for d in ds[:-1]}
    r[N] = -sum(r.values())
    h = EtaQuotient.make(N, {d: 24 * v for d, v in r.items()})
    assume(h.exponents)
    return h


@C8
@settings(max_examples=60, deadline=None)
@given(admissible_quotient())
def test_eta_divisor_properties(h):
    assert h.ligozat()[0]
    assert h.divisor().degree() == 0
    v = h.cusp_order(h.N)
    s = h.q_expansion(int(v) + 3)
    assert s.valuation == v
