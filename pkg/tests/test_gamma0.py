from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from critpoly.gamma0 import cusp_representatives, invariants


def p1_points(N):
    """Representatives (c : d) of P^1(Z/N)."""
    seen, pts = set(), []
    units = [u for u in range(1, N + 1) if gcd(u, N) == 1] if N > 1 else [1]
    for c in range(N):
        for d in range(N):
            if gcd(gcd(c, d), N) != 1:
                continue
            key = min(((u * c) % N, (u * d) % N) for u in units)
            if key not in seen:
                seen.add(key)
                pts.append(key)
    return pts, units


def orbit_oracle(N):
    """Cusp widths from orbits of (c:d) -> (c:c+d); elliptic counts from fixed points."""
    pts, units = p1_points(N)

    def norm(c, d):
        return min(((u * c) % N, (u * d) % N) for u in units)

    left = set(pts)
    widths = []
    while left:
        start = left.pop()
        size, cur = 1, norm(start[0], start[0] + start[1])
        while cur != start:
            left.discard(cur)
            size += 1
            cur = norm(cur[0], cur[0] + cur[1])
        widths.append(size)
    e2 = sum(1 for c, d in pts if norm(d, -c) == (c, d))
    e3 = sum(1 for c, d in pts if norm(d, -c - d) == (c, d))
    return len(pts), sorted(widths), e2, e3


@pytest.mark.parametrize("N", [1, 2, 11, 37, 44, 48, 64, 67, 89, 90, 99, 100, 120])
def test_invariants_match_coset_oracle(N):
    I = invariants(N)
    index, widths, e2, e3 = orbit_oracle(N)
    assert I.d_N == index
    assert sorted(c.width for c in I.cusps) == widths
    assert (I.eps2, I.eps3) == (e2, e3)


@pytest.mark.parametrize(
    "N,g", [(11, 1), (37, 2), (44, 4), (48, 3), (67, 5), (89, 7), (389, 32), (664, 81), (997, 82)]
)
def test_known_genera(N, g):
    assert invariants(N).genus == g


@given(st.integers(1, 3000))
def test_cusp_identities(N):
    I = invariants(N)
    assert sum(c.width for c in I.cusps) == I.d_N
    assert I.c_N == len(I.cusps)
    assert sum(1 for c in I.cusps if c.is_infinity) == 1
    assert I.infinity.width == 1


def test_cusp_labels_for_48():
    labels = {c.label for c in invariants(48).cusps}
    assert {"[1/4]", "[3/4]", "[1/12]", "[7/12]", "[0]", "[∞]"} <= labels


def test_representatives_are_coprime():
    for a in cusp_representatives(48, 12):
        assert gcd(a, 12) == 1
