"""Eta quotients on Gamma_0(N): admissibility, cusp divisors, solving.

An eta quotient h = prod_{d | N} eta(d z)^{r_d} is a modular function on
X_0(N) when Ligozat's four conditions hold.  Its order at a cusp a/c is

    (N/24) * sum_d r_d gcd(c, d)^2 / (gcd(c, N/c) c d),

independent of a, so prescribing a cusp divisor is a linear problem in r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy
from sympy import divisors, factorint

from . import modseries as ms
from .gamma0 import CuspClass, LevelInvariants, invariants
from .newform import newform_series
from .qseries import LaurentSeries, j_series, pentagonal_coeffs


class EtaError(ValueError):
    pass


@dataclass(frozen=True)
class EtaQuotient:
    N: int
    exponents: tuple[tuple[int, int], ...]  # sorted (d, r_d), zeros dropped

    @classmethod
    def make(cls, N: int, exps: dict[int, int]) -> "EtaQuotient":
        for d in exps:
            if d < 1 or N % d:
                raise EtaError(f"{d} does not divide {N}")
        return cls(N, tuple(sorted((d, int(r)) for d, r in exps.items() if r)))

    @classmethod
    def parse(cls, N: int, text: str) -> "EtaQuotient":
        """Parse "d:r,d:r,..."."""
        exps: dict[int, int] = {}
        text = text.strip()
        if text:
            for part in text.split(","):
                try:
                    d, r = part.split(":")
                    exps[int(d)] = exps.get(int(d), 0) + int(r)
                except ValueError as exc:
                    raise EtaError(f"bad exponent item {part!r}; expected d:r") from exc
        return cls.make(N, exps)

    @property
    def r(self) -> dict[int, int]:
        return dict(self.exponents)

    def __str__(self) -> str:
        return ",".join(f"{d}:{r}" for d, r in self.exponents) or "1"

    def times(self, other: "EtaQuotient") -> "EtaQuotient":
        out = self.r
        for d, r in other.exponents:
            out[d] = out.get(d, 0) + r
        return EtaQuotient.make(self.N, out)

    @property
    def q_shift(self) -> Fraction:
        """(1/24) sum d r_d, the exponent of the leading q-power."""
        return Fraction(sum(d * r for d, r in self.exponents), 24)

    def ligozat(self) -> tuple[bool, list[str]]:
        N = self.N
        r = self.r
        fails = []
        if sum(rd * (N // d) for d, rd in r.items()) % 24:
            fails.append("sum r_d N/d is not 0 mod 24")
        if sum(rd * d for d, rd in r.items()) % 24:
            fails.append("sum r_d d is not 0 mod 24")
        if sum(r.values()):
            fails.append("sum r_d is not 0 (weight is nonzero)")
        for ell in factorint(N):
            if sum(rd * _val(N // d, ell) for d, rd in r.items()) % 2:
                fails.append(f"prod (N/d)^r_d is not a square (prime {ell})")
        return not fails, fails

    def cusp_order(self, c: int) -> Fraction:
        """Order at any cusp with denominator c, in the local uniformizer."""
        N = self.N
        if N % c:
            raise EtaError(f"{c} does not divide {N}")
        g = math.gcd(c, N // c)
        s = sum(Fraction(rd * math.gcd(c, d) ** 2, d) for d, rd in self.exponents)
        return Fraction(N, 24) * s / (g * c)

    def divisor(self) -> "CuspDivisor":
        I = invariants(self.N)
        return CuspDivisor(self.N, {c: self.cusp_order(c.denominator) for c in I.cusps})

    def q_expansion(self, prec: int) -> LaurentSeries:
        """Exact expansion, coefficients below q^prec; requires an integral q-shift."""
        v = self.q_shift
        if v.denominator != 1:
            raise EtaError(f"fractional leading exponent {v}")
        v = int(v)
        rel = prec - v
        if rel <= 0:
            return LaurentSeries([], v, prec)
        out = LaurentSeries.one(rel)
        for d, rd in self.exponents:
            base = LaurentSeries.from_ints(pentagonal_coeffs(rel), 0, rel).dilate(d).truncate(rel)
            out = out * base**rd
        return out.shift(v)

    def unit_mod_p(self, p: int, n: int) -> np.ndarray:
        """prod_d P(q^d)^{r_d} mod p, n coefficients (P = prod (1 - q^k))."""
        out = np.zeros(n, dtype=np.int64)
        out[0] = 1
        for d, rd in self.exponents:
            base = np.zeros(n, dtype=np.int64)
            pc = pentagonal_coeffs(-(-n // d))
            base[::d] = np.array(pc, dtype=np.int64)[: len(base[::d])] % p
            out = ms.mul(out, ms.power(base, rd, p, n), p, n)
        return out


def _val(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass
class CuspDivisor:
    N: int
    mult: dict[CuspClass, Fraction]

    def degree(self) -> Fraction:
        return sum(self.mult.values(), Fraction(0))

    def at(self, label: str) -> Fraction:
        for c, v in self.mult.items():
            if c.label == label:
                return v
        raise KeyError(label)

    def nonzero(self) -> dict[str, Fraction]:
        return {c.label: v for c, v in self.mult.items() if v}

    def __str__(self) -> str:
        inf = [(c, v) for c, v in self.mult.items() if c.is_infinity]
        rest = sorted(
            ((c, v) for c, v in self.mult.items() if v and not c.is_infinity),
            key=lambda t: (-t[1], t[0].denominator, t[0].numerator),
        )
        parts = []
        for c, v in rest + [t for t in inf if t[1]]:
            parts.append(f"{'-' if v < 0 else '+'} {abs(v)}{c.label}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else ("-" + s[2:] if s else "0")


def ligozat_admissible(h: EtaQuotient) -> tuple[bool, list[str]]:
    return h.ligozat()


def cusp_order(h: EtaQuotient, c: int) -> Fraction:
    return h.cusp_order(c)


# -- prescribed divisors ----------------------------------------------------------


@lru_cache(maxsize=64)
def _order_matrix(N: int) -> tuple[tuple[int, ...], sympy.Matrix]:
    ds = tuple(divisors(N))
    rows = []
    for c in ds:
        g = math.gcd(c, N // c)
        rows.append([sympy.Rational(N * math.gcd(c, d) ** 2, 24 * g * c * d) for d in ds])
    return ds, sympy.Matrix(rows)


@dataclass
class _Forms:
    """Congruence forms w . t = 0 mod n on the free cusp orders t."""

    vectors: list[list[int]] = field(default_factory=list)
    moduli: list[int] = field(default_factory=list)

    def add(self, w: list[Fraction], mod: int) -> None:
        den = math.lcm(*(x.denominator for x in w)) if w else 1
        ints = [int(x * den) % (mod * den) for x in w]
        m = mod * den
        g = math.gcd(m, *ints)
        if g == m:
            return
        self.vectors.append([x // g for x in ints])
        self.moduli.append(m // g)

    def state(self, t: list[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(v, t)) % m for v, m in zip(self.vectors, self.moduli))


def _build_forms(N: int, free: list[int], inf_index: int, counts: list[int]):
    ds, A = _order_matrix(N)
    Ainv = A.inv()
    k = len(ds)
    # r = Ainv * t, with t_inf = -sum_{c free} count_c t_c
    W = []
    for i in range(k):
        row = []
        for j in free:
            coef = Fraction(str(Ainv[i, j])) - Fraction(str(Ainv[i, inf_index])) * counts[j]
            row.append(coef)
        W.append(row)
    forms = _Forms()
    for i in range(k):
        forms.add(W[i], 1)
    nf = len(free)

    def combo(weights):
        return [sum(Fraction(weights[i]) * W[i][j] for i in range(k)) for j in range(nf)]

    forms.add(combo([N // d for d in ds]), 24)
    forms.add(combo(list(ds)), 24)
    for ell in factorint(N):
        forms.add(combo([_val(N // d, ell) for d in ds]), 2)
    return ds, W, forms


def _hnf(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form over Z (upper triangular, positive pivots)."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[col] else rest).append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    for i, r in enumerate(out):
        c = next(k for k, x in enumerate(r) if x)
        for j in range(i):
            q = out[j][c] // r[c]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], r)]
    return out + rows


def _lattice(forms: _Forms, k: int) -> list[list[int]]:
    """Basis (Hermite form) of {t in Z^k : every form vanishes on t}."""
    f = len(forms.moduli)
    rows = []
    for i in range(k):
        rows.append([v[i] % m for v, m in zip(forms.vectors, forms.moduli)] + [int(i == j) for j in range(k)])
    for j, m in enumerate(forms.moduli):
        rows.append([m * int(i == j) for i in range(f)] + [0] * k)
    H = _hnf(rows, f)
    kernel = [r[f:] for r in H if not any(r[:f])]
    basis = _hnf(kernel, k)
    if len(basis) != k:
        raise EtaError("congruence lattice is not of full rank")
    return basis


def _min_cost_point(basis, offset, lower, cost, max_nodes=200_000):
    """Minimize cost . t over t = offset + x B (B upper triangular), t >= lower."""
    k = len(lower)
    best = [None, None]
    nodes = [0]

    def rec(i, t, acc):
        if i == k:
            if best[0] is None or acc < best[0]:
                best[0], best[1] = acc, list(t)
            return
        nodes[0] += 1
        if nodes[0] > max_nodes and best[0] is not None:
            return
        d = basis[i][i]
        x = -((t[i] - lower[i]) // d)  # smallest x with t[i] + x d >= lower[i]
        tail = sum(cost[j] * lower[j] for j in range(i + 1, k))
        while True:
            ti = t[i] + x * d
            here = acc + cost[i] * ti
            if best[0] is not None and here + tail >= best[0]:
                break
            nt = [a + x * b for a, b in zip(t, basis[i])]
            rec(i + 1, nt, here)
            x += 1
            if best[0] is None:
                break

    rec(0, list(offset), 0)
    return best[1]


def solve_prescribed_divisor(
    N: int,
    target: dict[int, int],
    *,
    parity: int | None = None,
) -> EtaQuotient:
    """Admissible h with ord_c(h) >= target[c] off infinity and a pole at infinity.

    ``target`` maps cusp denominators c (c != N) to lower bounds on the
    order of h at every cusp with that denominator.  The pole order m at
    infinity is minimized exactly over the lattice of admissible orders.
    With ``parity`` set, m is restricted to that residue mod 2.
    """
    if N == 1:
        raise EtaError("X_0(1) has a single cusp; no nonconstant eta quotient exists")
    I = invariants(N)
    ds = list(divisors(N))
    inf_index = ds.index(N)
    counts = [sum(1 for c in I.cusps if c.denominator == d) for d in ds]
    free = [i for i in range(len(ds)) if i != inf_index]
    for c, v in target.items():
        if c == N or N % c:
            raise EtaError(f"target cusp denominator {c} invalid for N={N}")
        if v < 0:
            raise EtaError("prescribed divisor must be effective")
    lower = [int(target.get(ds[i], 0)) for i in free]
    cost = [counts[i] for i in free]
    _, W, forms = _build_forms(N, free, inf_index, counts)
    k = len(free)
    offset = [0] * k
    if parity is not None:
        base = _lattice(forms, k)
        odd = [b for b in base if sum(c * x for c, x in zip(cost, b)) % 2 == parity % 2]
        if parity % 2 == 0:
            odd = [[0] * k]
        if not odd:
            raise EtaError(f"no admissible quotient with pole order of parity {parity} at level {N}")
        offset = odd[0]
        forms.vectors.append([c % 2 for c in cost])
        forms.moduli.append(2)
    basis = _lattice(forms, k)
    if any(lower):
        t = _min_cost_point(basis, offset, lower, cost)
    else:
        # m > 0 is required, so force one cusp order up and keep the cheapest
        t, best = None, None
        for j in range(k):
            lo = [int(i == j) for i in range(k)]
            cand = _min_cost_point(basis, offset, lo, cost)
            c = sum(a * b for a, b in zip(cost, cand))
            if best is None or c < best:
                t, best = cand, c
    if t is None:
        raise EtaError(f"no admissible eta quotient found for N={N}")
    return _from_orders(N, ds, W, free, t)


def _from_orders(N, ds, W, free, t) -> EtaQuotient:
    exps = {}
    for i, d in enumerate(ds):
        v = sum(W[i][j] * t[j] for j in range(len(free)))
        if v.denominator != 1:
            raise EtaError("solver produced non-integral exponents")
        exps[d] = int(v)
    h = EtaQuotient.make(N, exps)
    ok, why = h.ligozat()
    if not ok:
        raise EtaError(f"solver produced a non-admissible quotient: {why}")
    return h


# -- Yang pairs ---------------------------------------------------------------------


@dataclass
class YangPairMeta:
    h: EtaQuotient
    use_j: bool  # h replaced by j*h
    m: int  # pole order of the x-function r~
    n: int  # pole order of the y-function h~
    deg_h: int  # equals m: total pole order of r~
    x_scale: int  # r~ was multiplied by this to make it monic
    cusp_target: dict[int, int]


def yang_target(I: LevelInvariants, per_width: int, plus: int) -> dict[int, int]:
    """Lower bounds per_width * width + plus at every cusp off infinity."""
    out = {}
    for c in I.cusps:
        if not c.is_infinity:
            out[c.denominator] = max(out.get(c.denominator, 0), per_width * c.width + plus)
    return out


def choose_yang_h(
    N: int, *, cusp_multiplier: int | None = None, eta: EtaQuotient | None = None
) -> YangPairMeta:
    """Pick h (or j*h) so that r h and j(j-1728) h form a Yang pair."""
    I = invariants(N)
    candidates = []
    if eta is not None:
        targets = [(eta, yang_target(I, 2, 1))]
    elif cusp_multiplier is not None:
        tgt = yang_target(I, cusp_multiplier, 0)
        targets = [(solve_prescribed_divisor(N, tgt), tgt)]
    else:
        t2 = yang_target(I, 2, 1)
        t3 = yang_target(I, 3, 1)
        targets = [(solve_prescribed_divisor(N, t2), t2)]
        try:
            targets.append((solve_prescribed_divisor(N, t2, parity=1), t2))
        except EtaError:
            pass
        targets.append((solve_prescribed_divisor(N, t3), t3))
    for h, tgt in targets:
        mh = -int(h.cusp_order(N))
        if mh <= 0:
            continue
        orders = {c.denominator: h.cusp_order(c.denominator) for c in I.cusps if not c.is_infinity}
        widths = {c.denominator: c.width for c in I.cusps}
        if mh % 2 == 1 and all(orders[c] >= 2 * widths[c] + 1 for c in orders):
            candidates.append(YangPairMeta(h, False, mh, mh + 2, mh, -1, tgt))
        if mh % 2 == 0 and all(orders[c] >= 3 * widths[c] + 1 for c in orders):
            candidates.append(YangPairMeta(h, True, mh + 1, mh + 3, mh + 1, -1, tgt))
    if not candidates:
        raise EtaError(f"could not build a Yang pair at level {N}")
    return min(candidates, key=lambda c: (c.m * c.n, c.m))


def build_yang_pair(curve, inv: LevelInvariants | None = None, *, prec: int | None = None,
                    cusp_multiplier: int | None = None, eta: EtaQuotient | None = None):
    """Exact q-expansions (g~, h~) of the Yang pair, both monic, plus metadata.

    g~ = -r h (or -r j h) and h~ = j(j-1728) h (or j^2 (j-1728) h).
    """
    N = curve.conductor
    meta = choose_yang_h(N, cusp_multiplier=cusp_multiplier, eta=eta)
    m, n = meta.m, meta.n
    L = m * n + 1 if prec is None else prec
    # precision budget: every factor carries about L + n + 4 relative terms
    P = L + n + 4
    j = j_series(P)
    f = newform_series(curve, P + 2)
    dj = j.derivative()
    r = j * (j - 1728) * f / dj
    h = meta.h.q_expansion(P)
    if meta.use_j:
        h = h * j
    g_t = (r * h).scale(meta.x_scale)
    h_t = j * (j - 1728) * h
    g_t = g_t.truncate(min(g_t.prec, -m + L))
    h_t = h_t.truncate(min(h_t.prec, -n + L))
    if g_t.valuation != -m or h_t.valuation != -n:
        raise EtaError("pole orders differ from the divisor bookkeeping")
    return g_t, h_t, meta
