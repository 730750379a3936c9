"""Minimal polynomial relations between two q-series.

Two engines:

* ``dense_min_relation``: the kernel of the linear map sending the
  coefficient vector of P(x, y), deg_x P <= X, deg_y P <= Y, to the
  expansion of P(r, u).  Computed modulo word primes, either by a
  Hermite-Pade order basis in the variable u (when u has a simple zero at
  q = 0) or by Gaussian elimination, then lifted by CRT.
* ``yang_relation``: pole cancellation for two series with single poles of
  coprime orders m and n, giving y^m - x^n + (lower pole order terms).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterator

import numpy as np

from . import modseries as ms
from ._kernels import nullspace_mod_p, order_basis
from .exact.crt import CRTAccumulator, lift, primes_from
from .exact.intpoly import IntPoly
from .qseries import LaurentSeries

log = logging.getLogger(__name__)


class RelationError(RuntimeError):
    pass


class BadPrime(ArithmeticError):
    pass


class BivarPoly:
    """P(x, y) = sum c[a, b] x^a y^b with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction | int] | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @property
    def degx(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    @property
    def degy(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def __getitem__(self, ab: tuple[int, int]) -> Fraction:
        return self.terms.get(ab, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        return f"BivarPoly({len(self.terms)} terms, degx={self.degx}, degy={self.degy})"

    def __str__(self) -> str:
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda t: (-t[0][0] - t[0][1], -t[0][0])):
            mono = "*".join(
                s for s in (
                    "" if a == 0 else ("x" if a == 1 else f"x^{a}"),
                    "" if b == 0 else ("y" if b == 1 else f"y^{b}"),
                ) if s
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts) if parts else "0"

    def slice(self, a: int) -> IntPoly:
        """f_a(y), the coefficient of x^a."""
        deg = max((b for (aa, b) in self.terms if aa == a), default=-1)
        return IntPoly([self[a, b] for b in range(deg + 1)])

    def primitive(self) -> "BivarPoly":
        """Integral, content 1, positive leading coefficient in graded lex order."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        g = 0
        for c in self.terms.values():
            g = gcd(g, (c * den).numerator)
        lead = max(self.terms, key=lambda ab: (ab[0] + ab[1], ab[0]))
        s = Fraction(den, g) * (1 if self.terms[lead] > 0 else -1)
        return BivarPoly({k: v * s for k, v in self.terms.items()})

    def scale(self, c) -> "BivarPoly":
        return BivarPoly({k: v * c for k, v in self.terms.items()})

    def same_up_to_scalar(self, other: "BivarPoly") -> bool:
        return self.primitive() == other.primitive()

    def evaluate(self, x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
        """P(x, y) by Horner in x; each f_a(y) by Horner in y."""
        acc = None
        for a in range(self.degx, -1, -1):
            fa = self.slice(a)
            term = _horner(fa, y)
            acc = term if acc is None else acc * x + term
        return acc

    def evaluate_x(self, x0) -> IntPoly:
        """P(x0, y) as a polynomial in y."""
        out = {}
        for (a, b), c in self.terms.items():
            out[b] = out.get(b, 0) + c * Fraction(x0) ** a
        top = max(out, default=-1)
        return IntPoly([out.get(b, 0) for b in range(top + 1)])


def _horner(f: IntPoly, y: LaurentSeries) -> LaurentSeries:
    acc = None
    for c in reversed(f.coeffs):
        acc = LaurentSeries([c], 0, y.prec) if acc is None else acc * y + c
    if acc is None:
        return LaurentSeries([], 0, y.prec)
    return acc


def slice_f0(P: BivarPoly) -> IntPoly:
    return P.slice(0)


def slice_fn(P: BivarPoly) -> IntPoly:
    return P.slice(P.degx)


# -- mod-p order basis ----------------------------------------------------------


@dataclass
class ApproximantResult:
    coeffs: np.ndarray  # (rows, D+1): coeffs[a, t] = [y^t] f_a
    degy: int
    degx: int


def _run_basis(rows: np.ndarray, p: int, D: int, sigma: int) -> tuple[np.ndarray, np.ndarray]:
    m = rows.shape[0]
    E = np.ascontiguousarray(rows[:, :sigma].copy())
    cap = max(8, 2 * (sigma // m + 2))
    B = np.zeros((m, m, cap), dtype=np.int64)
    for i in range(m):
        B[i, i, 0] = 1
    deg = np.zeros(m, dtype=np.int64)
    k = 0
    while k < sigma:
        k = order_basis(E, B, deg, p, k, sigma)
        if k < sigma:
            grown = np.zeros((m, m, 2 * B.shape[2]), dtype=np.int64)
            grown[:, :, : B.shape[2]] = B
            B = grown
    return B, deg


def _check_rows(rows: np.ndarray, cand: np.ndarray, p: int, length: int) -> bool:
    acc = np.zeros(length, dtype=np.int64)
    for a in range(cand.shape[0]):
        f = cand[a]
        if not f.any():
            continue
        acc = (acc + ms.mul(f, rows[a], p, length)) % p
    return not acc.any()


def min_approximant_mod_p(
    rows: np.ndarray, p: int, D: int, sigma: int | None = None, verify_len: int | None = None
) -> ApproximantResult:
    """Minimal vector (f_a) of y-degree <= D with sum f_a * rows[a] = 0.

    ``rows`` holds the series of the x-powers in the variable y, already
    truncated to the verification length.  Candidates of degree <= D are
    checked against the full length; if a spurious one shows up the order
    is raised.  When several true approximants survive (the relation does
    not involve every x-power) the x-degree bound is lowered until the
    kernel has rank one.
    """
    m_full, L = rows.shape
    verify_len = L if verify_len is None else verify_len
    n = m_full - 1
    best = None
    while n >= 0:
        m = n + 1
        sig = min(L, sigma if sigma is not None else m * (D + 1) + 2 * m + 8)
        while True:
            B, deg = _run_basis(rows[:m], p, D, sig)
            cands = [i for i in range(m) if deg[i] <= D]
            good = [i for i in cands if _check_rows(rows[:m], B[i, :, : D + 1], p, verify_len)]
            if len(good) == len(cands) or sig >= L:
                break
            sig = min(L, sig + sig // 4 + m)
        if not good:
            break
        if len(good) == 1:
            c = B[good[0], :, : D + 1].copy()
            best = ApproximantResult(c, int(deg[good[0]]), _xdeg(c))
            break
        n = min(_xdeg(B[i, :, : D + 1]) for i in good)
        n = n if n < m - 1 else m - 2
    if best is None:
        raise RelationError(
            f"no approximant of y-degree <= {D} with {m_full} x-powers "
            f"(series length {L}, prime {p})"
        )
    return best


def _xdeg(c: np.ndarray) -> int:
    nz = [a for a in range(c.shape[0]) if c[a].any()]
    return max(nz) if nz else -1


def power_rows(R: np.ndarray, n: int, p: int, length: int, shift: int = 0) -> np.ndarray:
    """Rows u^((n-a)*shift) * R^a for a = 0..n, truncated to ``length``."""
    out = np.zeros((n + 1, length), dtype=np.int64)
    cur = np.zeros(length, dtype=np.int64)
    cur[0] = 1
    Rl = ms.pad(R, length)
    for a in range(n + 1):
        s = (n - a) * shift
        if s < length:
            out[a, s:] = cur[: length - s]
        if a < n:
            cur = ms.mul(cur, Rl, p, length)
    return out


# -- dense matrix route ------------------------------------------------------------


def graded_lex(degx: int, degy: int) -> list[tuple[int, int]]:
    mons = [(a, b) for a in range(degx + 1) for b in range(degy + 1)]
    mons.sort(key=lambda ab: (ab[0] + ab[1], ab[0]))
    return mons


def _series_powers_mod_p(s: LaurentSeries, k: int, p: int, start: int, stop: int) -> list[np.ndarray]:
    """Coefficient windows [start, stop) of s^0 .. s^k mod p."""
    v = s.valuation
    rel = stop - start
    known = s.prec - v
    for e in range(1, k + 1):
        if e * v + known < stop:
            raise RelationError(
                f"series known to q^{s.prec - 1}; its {e}-th power is needed through q^{stop - 1}"
            )
    unit = ms.pad(s.mod_coeffs(p, v, min(s.prec, v + rel)), rel)
    if unit[0] == 0:
        raise BadPrime(p)
    out = []
    cur = ms.pad(np.ones(1, dtype=np.int64), rel)
    for e in range(k + 1):
        val = e * v
        w = np.zeros(rel, dtype=np.int64)
        lo, hi = max(start, val), min(stop, val + rel)
        if lo < hi:
            w[lo - start : hi - start] = cur[lo - val : hi - val]
        out.append(w)
        cur = ms.mul(cur, unit, p, rel)
    return out


def dense_kernel_mod_p(
    r1: LaurentSeries, u: LaurentSeries, degx: int, degy: int, M: int, p: int
) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Kernel basis of the (q-powers below M) x (graded-lex monomials) matrix."""
    xmin = min(0, degx * r1.valuation)
    ymin = min(0, degy * u.valuation)
    start = xmin + ymin
    xs = _series_powers_mod_p(r1, degx, p, start, M - ymin)
    ys = _series_powers_mod_p(u, degy, p, start, M - xmin)
    mons = graded_lex(degx, degy)
    L = M - start
    A = np.zeros((L, len(mons)), dtype=np.int64)
    for j, (a, b) in enumerate(mons):
        full = ms.mul(xs[a], ys[b], p, L - start)
        A[:, j] = full[-start : -start + L]
    rank, piv = nullspace_mod_p(A, p)
    pivset = set(int(c) for c in piv)
    free = [j for j in range(len(mons)) if j not in pivset]
    basis = np.zeros((len(free), len(mons)), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for r, c in enumerate(piv):
            basis[t, c] = (-A[r, f]) % p
    return mons, basis


# -- lifting -----------------------------------------------------------------


def _reconstruct(
    images: Iterator[tuple[int, tuple, np.ndarray]],
    min_primes: int = 2,
    max_primes: int = 400,
) -> tuple[tuple, list[Fraction]]:
    """Lift integer-normalized images; accept when one extra prime confirms.

    ``images`` yields (p, signature, residues).  Images whose signature
    disagrees with the majority are discarded.
    """
    groups: dict[tuple, tuple[CRTAccumulator, list[int]]] = {}
    last: dict[tuple, list[Fraction] | None] = {}
    used = 0
    for p, sig, res in images:
        used += 1
        if used > max_primes:
            break
        if sig not in groups:
            groups[sig] = (CRTAccumulator(len(res)), [])
        acc, plist = groups[sig]
        prev = lift(acc.values, acc.modulus) if plist else None
        acc.add(res, p)
        plist.append(p)
        top = max(groups, key=lambda s: (len(groups[s][1]), s))
        if sig != top:
            continue
        cur = lift(acc.values, acc.modulus)
        if cur is not None and prev is not None and cur == prev and len(plist) >= min_primes:
            return sig, cur
        last[sig] = cur
    raise RelationError(f"reconstruction did not stabilize within {max_primes} primes")


def _normalize_vector(vec: np.ndarray, p: int, pivot: int) -> np.ndarray | None:
    c = int(vec[pivot]) % p
    if c == 0:
        return None
    return (vec * pow(c, -1, p)) % p


def dense_min_relation(
    r1: LaurentSeries,
    u: LaurentSeries,
    degx_bound: int,
    degy_bound: int,
    M: int | None = None,
    *,
    method: str = "auto",
    seed: int | None = None,
    max_primes: int = 200,
) -> BivarPoly:
    """Minimal relation P(r1, u) = 0 with deg_x P <= degx_bound, deg_y P <= degy_bound."""
    if M is None:
        M = 2 * degx_bound * degy_bound + 1
    if M <= 2 * degx_bound * degy_bound:
        raise ValueError("M must exceed 2 * degx_bound * degy_bound")
    if method == "auto":
        method = "basis" if u.valuation == 1 else "matrix"
    primes = primes_from(seed) if seed is not None else primes_from()
    pivot_state: dict[str, tuple[int, int]] = {}

    def images():
        for p in primes:
            try:
                P = (
                    _basis_image(r1, u, degx_bound, degy_bound, M, p)
                    if method == "basis"
                    else _matrix_image(r1, u, degx_bound, degy_bound, M, p)
                )
            except (BadPrime, ZeroDivisionError):
                continue
            degx, degy, arr = P
            if "pivot" not in pivot_state:
                nz = np.argwhere(arr)
                a, b = max(((int(i), int(j)) for i, j in nz), key=lambda ab: (ab[0] + ab[1], ab[0]))
                pivot_state["pivot"] = (a, b)
            a, b = pivot_state["pivot"]
            if a > degx or b > degy or arr[a, b] == 0:
                continue
            arr = (arr * pow(int(arr[a, b]), -1, p)) % p
            yield p, (degx, degy), arr.ravel()

    (degx, degy), vals = _reconstruct(images(), max_primes=max_primes)
    P = BivarPoly(
        {(a, b): vals[a * (degy + 1) + b] for a in range(degx + 1) for b in range(degy + 1)}
    ).primitive()
    check = P.evaluate(r1, u)
    check_to = min(M, check.prec)
    if not check.truncate(check_to).is_zero():
        raise RelationError(
            f"lifted relation fails at q^{check.valuation} "
            f"(bounds {degx_bound}x{degy_bound}, M={M})"
        )
    return P


def _basis_image(r1, u, X, Y, M, p):
    if u.valuation != 1:
        raise RelationError("order-basis route needs u with a simple zero")
    v = r1.valuation
    t = max(0, -v)
    L = M + X * t
    if u.prec < L or r1.prec - v < L:
        raise RelationError(
            f"need u through q^{L - 1} and r1 through q^{v + L - 1} "
            f"(have {u.prec - 1}, {r1.prec - 1})"
        )
    Ucoef = u.mod_coeffs(p, 0, max(L, 2))
    if Ucoef[1] == 0:
        raise BadPrime(p)
    Q = ms.revert(Ucoef, p, max(L, 2))[:L]
    s = r1.mod_coeffs(p, v, v + L)
    if s[0] == 0:
        raise BadPrime(p)
    # r1(Q(u)) = u^v * (Q/u)^v * s(Q); the rows carry the factor u^(X t)
    R = ms.mul(ms.power(ms.pad(Q[1:], L), v, p, L), ms.compose(s, Q, p, L), p, L)
    if v > 0:
        R = ms.pad(np.concatenate([np.zeros(v, dtype=np.int64), R]), L)
    rows = power_rows(R, X, p, L, shift=t)
    res = min_approximant_mod_p(rows, p, Y)
    arr = np.zeros((X + 1, Y + 1), dtype=np.int64)
    arr[: res.coeffs.shape[0], :] = res.coeffs
    return _trim_degrees(arr)


def _trim_degrees(arr: np.ndarray):
    nzx = [a for a in range(arr.shape[0]) if arr[a].any()]
    nzy = [b for b in range(arr.shape[1]) if arr[:, b].any()]
    degx = max(nzx)
    degy = max(nzy)
    return degx, degy, arr[: degx + 1, : degy + 1].copy()


def _matrix_image(r1, u, X, Y, M, p):
    # shrink y then x bounds until the kernel is one-dimensional
    y = Y
    while y >= 0:
        mons, basis = dense_kernel_mod_p(r1, u, X, y, M, p)
        if len(basis) == 0:
            break
        y -= 1
    y += 1
    if y > Y:
        raise RelationError(f"empty kernel: {M} q-powers x {(X + 1) * (Y + 1)} monomials (prime {p})")
    x = X
    while x >= 0:
        mons, basis = dense_kernel_mod_p(r1, u, x, y, M, p)
        if len(basis) == 0:
            break
        x -= 1
    x += 1
    mons, basis = dense_kernel_mod_p(r1, u, x, y, M, p)
    if len(basis) != 1:
        raise RelationError(f"kernel dimension {len(basis)} after degree reduction (prime {p})")
    arr = np.zeros((X + 1, Y + 1), dtype=np.int64)
    for (a, b), c in zip(mons, basis[0]):
        arr[a, b] = c
    return _trim_degrees(arr)


# -- Yang pairs -------------------------------------------------------------------


def _yang_check(m: int, n: int) -> None:
    if m < 1 or n < 1 or gcd(m, n) != 1:
        raise RelationError(f"pole orders ({m}, {n}) are not coprime")


def yang_monomial(k: int, m: int, n: int) -> tuple[int, int] | None:
    """The unique (a, b) with a*m + b*n = k and 0 <= a < n, if any."""
    # a = k * m^{-1} mod n
    a = (k * pow(m, -1, n)) % n if n > 1 else 0
    rest = k - a * m
    if rest < 0 or rest % n:
        return None
    return a, rest // n


def yang_relation(g: LaurentSeries, h: LaurentSeries) -> BivarPoly:
    """Relation y^m - x^n + sum c_ab x^a y^b for g = q^-m + ..., h = q^-n + ...

    ``g`` is substituted for x and ``h`` for y, so the x-degree is the pole
    order of h and the y-degree the pole order of g.
    """
    m, n = -g.valuation, -h.valuation
    _yang_check(m, n)
    if g.leading != 1 or h.leading != 1:
        raise RelationError("Yang pair entries must have leading coefficient 1")
    need = m * n + 1
    if g.prec < need - m or h.prec < need - n:
        raise RelationError(
            f"precision shortfall: need coefficients through q^{m * n - m} (g) and q^{m * n - n} (h)"
        )
    gp = [LaurentSeries.one(g.prec + m)]
    for _ in range(n - 1):
        gp.append(gp[-1] * g)
    hp = [LaurentSeries.one(h.prec + n)]
    for _ in range(m):
        hp.append(hp[-1] * h)
    S = hp[m] - gp[-1] * g
    terms: dict[tuple[int, int], Fraction] = {(0, m): Fraction(1), (n, 0): Fraction(-1)}
    for k in range(m * n - 1, -1, -1):
        c = S[-k] if -k >= S.valuation else Fraction(0)
        if c == 0:
            continue
        ab = yang_monomial(k, m, n)
        if ab is None:
            raise RelationError(f"no monomial of pole order {k} for orders ({m}, {n})")
        a, b = ab
        terms[(a, b)] = terms.get((a, b), 0) - c
        S = S - (gp[a] * hp[b]).scale(c)
    tail = S.truncate(min(S.prec, 1))
    if not tail.is_zero():
        raise RelationError(f"residual keeps a pole at q^{tail.valuation}; precision too low")
    return BivarPoly(terms)


def yang_f0_mod_p(G: np.ndarray, H: np.ndarray, m: int, n: int, p: int) -> np.ndarray:
    """f_0 = P(0, y) mod p, coefficients of y^0..y^m."""
    coeffs = yang_relation_mod_p(G, H, m, n, p)
    f0 = np.zeros(m + 1, dtype=np.int64)
    for (a, b), c in coeffs.items():
        if a == 0:
            f0[b] = c
    return f0


def yang_relation_mod_p(G: np.ndarray, H: np.ndarray, m: int, n: int, p: int) -> dict:
    """Coefficients c_ab mod p of the Yang relation for a pair given mod p.

    ``G`` and ``H`` hold q^m g and q^n h as power series with at least
    m*n + 1 coefficients.  Every monomial is scaled by q^(mn), so the
    pole of order k sits at index mn - k.
    """
    _yang_check(m, n)
    L = m * n + 1
    G = ms.pad(G, L)
    H = ms.pad(H, L)
    if G[0] != 1 or H[0] != 1:
        raise BadPrime(p)
    gp = [ms.pad(np.ones(1, dtype=np.int64), L)]
    for _ in range(n):
        gp.append(ms.mul(gp[-1], G, p, L))
    hp = [ms.pad(np.ones(1, dtype=np.int64), L)]
    for _ in range(m):
        hp.append(ms.mul(hp[-1], H, p, L))
    S = (hp[m] - gp[n]) % p
    coeffs = {(0, m): 1, (n, 0): p - 1}
    for k in range(m * n - 1, -1, -1):
        off = m * n - k
        c = int(S[off])
        if c == 0:
            continue
        a, b = yang_monomial(k, m, n)
        S[off:] = (S[off:] - c * ms.mul(gp[a][: L - off], hp[b][: L - off], p, L - off) % p) % p
        coeffs[(a, b)] = (coeffs.get((a, b), 0) - c) % p
    if S.any():
        raise RelationError("Yang residual does not vanish; inputs inconsistent")
    return coeffs
