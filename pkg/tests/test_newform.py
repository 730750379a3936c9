import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import isprime, primerange

from critpoly.newform import (
    CurveData,
    CurveError,
    a_p,
    count_points_naive,
    load_curve,
    newform_coefficients,
)

E37 = CurveData("37a", (0, 0, 1, -1, 0), 37, 1)


def test_37a_head():
    a = newform_coefficients(E37, 12)
    assert a[1:] == [1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5, -6]


def test_a_p_matches_point_count():
    for p in primerange(3, 60):
        if p != 37:
            assert a_p(E37, p) == p + 1 - count_points_naive(E37, p)


@pytest.mark.parametrize("label", ["37a", "37b", "44a", "48a", "67a", "89a", "389a"])
def test_fixture_hasse_and_multiplicativity(label):
    E = load_curve(label)
    a = newform_coefficients(E, 400)
    for p in primerange(2, 400):
        if E.conductor % p:
            assert a[p] ** 2 <= 4 * p
    for m in range(2, 20):
        for n in range(2, 20):
            if m * n <= 400 and __import__("math").gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n]


@settings(max_examples=30)
@given(st.integers(2, 150))
def test_hecke_recursion_at_good_primes(p):
    if not isprime(p) or 37 % p == 0:
        return
    a = newform_coefficients(E37, p**2)
    assert a[p * p] == a[p] ** 2 - p


def test_rank_flag():
    assert load_curve("389a").rank_at_least_two
    assert not E37.rank_at_least_two


def test_bad_inputs(tmp_path):
    with pytest.raises(CurveError, match="singular"):
        CurveData("x", (0, 0, 0, 0, 0), 1)
    with pytest.raises(CurveError, match="divide"):
        CurveData("x", (0, 0, 1, -1, 0), 38)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(CurveError, match="malformed"):
        load_curve(bad)
    with pytest.raises(FileNotFoundError):
        load_curve(tmp_path / "missing.json")
    with pytest.raises(FileNotFoundError):
        load_curve("no-such-curve")


def test_fixture_round_trip(tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps(E37.to_json()))
    assert load_curve(path) == E37
