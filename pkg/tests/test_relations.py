from fractions import Fraction

import numpy as np
import pytest

from critpoly.qseries import LaurentSeries, j_series, u_series
from critpoly.relations import (
    BivarPoly,
    RelationError,
    dense_min_relation,
    yang_monomial,
    yang_relation,
    yang_relation_mod_p,
)

P = 2147483647


def test_identity_relation():
    u = u_series(20)
    rel = dense_min_relation(u, u, 1, 1)
    assert rel == BivarPoly({(1, 0): 1, (0, 1): -1})


def test_square_relation_and_stability():
    u = u_series(80)
    r1 = u * u + u**3 * 5
    base = dense_min_relation(r1, u, 1, 3)
    assert base == BivarPoly({(1, 0): -1, (0, 2): 1, (0, 3): 5})
    # extra terms change nothing
    assert dense_min_relation(r1, u, 1, 3, M=2 * 3 + 51) == base
    assert base.evaluate(r1, u).truncate(30).is_zero()


def test_relation_through_the_matrix_route():
    u = u_series(40)
    r1 = u + u * u * 2 + 3
    rel = dense_min_relation(r1, u, 1, 2, method="matrix")
    assert rel == BivarPoly({(1, 0): -1, (0, 0): 3, (0, 1): 1, (0, 2): 2})


def test_bad_precision_argument():
    u = u_series(10)
    with pytest.raises(ValueError):
        dense_min_relation(u, u, 2, 2, M=8)


def yang_example(prec=30):
    j = j_series(prec)
    g = j * j + j * 5 - 7  # pole 2
    h = j * j * j - j * 11  # pole 3
    return g, h


def test_yang_exact_relation():
    g, h = yang_example()
    rel = yang_relation(g, h)
    assert rel[(0, 2)] == 1 and rel[(3, 0)] == -1
    assert rel.evaluate(g, h).truncate(1).is_zero()
    for a, b in rel.terms:
        assert 2 * a + 3 * b <= 6


def test_yang_mod_p_matches_exact():
    g, h = yang_example()
    rel = yang_relation(g, h)
    G = g.shift(2).mod_coeffs(P, 0, 7)
    H = h.shift(3).mod_coeffs(P, 0, 7)
    got = yang_relation_mod_p(G, H, 2, 3, P)
    want = {ab: int(Fraction(c) % P) if Fraction(c).denominator == 1 else None for ab, c in rel.terms.items()}
    assert {k: v for k, v in got.items() if v} == want


def test_yang_needs_coprime_orders():
    j = j_series(20)
    with pytest.raises(RelationError):
        yang_relation(j * j, j**4)
    assert yang_monomial(7, 2, 3) == (2, 1)
    assert yang_monomial(1, 2, 3) is None


def test_yang_precision_shortfall():
    j = j_series(2)
    with pytest.raises(RelationError, match="precision"):
        yang_relation(j * j, j**3)


def test_evaluate_x():
    Pxy = BivarPoly({(0, 2): 1, (1, 0): -4, (0, 0): 3})
    assert Pxy.evaluate_x(2).int_coeffs() == [-5, 0, 1]
    assert np.array_equal(np.array(Pxy.slice(0).int_coeffs()), np.array([3, 0, 1]))
