"""Factor F against class polynomials and decide whether rank E_crit(Q) = 0."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import sympy

from .classpoly import class_number, hilbert_class_poly, j_value, reduced_forms
from .exact.crt import prime_pool
from .exact.intpoly import IntPoly, poly_gcd
from .exact.modpoly import ModPoly, degree_pattern, is_squarefree

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
INCONCLUSIVE = "inconclusive"
UNIT = "unit"

SYMPY_FACTOR_DEGREE = 24


@dataclass
class Factorization:
    hilbert: list[tuple[int, int]]  # (discriminant, exponent), decreasing discriminant
    cofactor: IntPoly
    cofactor_status: str
    d_max: int = 0

    def expand(self) -> IntPoly:
        out = self.cofactor
        for d, e in self.hilbert:
            out = out * hilbert_class_poly(d) ** e
        return out

    def describe(self) -> str:
        parts = []
        for d, e in self.hilbert:
            parts.append(f"H_{{{d}}}(x)" + (f"^{e}" if e > 1 else ""))
        c = self.cofactor
        if c.degree > 0:
            parts.append(f"({_lead_terms(c)})")
        return " * ".join(parts) if parts else "1"


def _lead_terms(f: IntPoly) -> str:
    n = f.degree
    if n <= 4:
        return str(f)
    nxt = f[n - 1]
    sign = "-" if nxt < 0 else "+"
    body = f"x^{n} {sign} {abs(nxt)}*x^{n - 1}" if nxt else f"x^{n}"
    return body + " + ..."


@dataclass
class Verdict:
    proved: bool | None  # True, or None for inconclusive
    rule: str | None
    explanation: str
    notes: list[str] = field(default_factory=list)


def discriminants(d_max: int):
    """Negative discriminants -3, -4, -7, ... down to -d_max."""
    for k in range(3, d_max + 1):
        if (-k) % 4 in (0, 1):
            yield -k


def _relative_residual(F: IntPoly, z) -> float:
    num = mpmath.mpc(0)
    den = mpmath.mpf(0)
    az = max(abs(z), 1)
    for c in reversed(F.int_coeffs()):
        num = num * z + c
        den = den * az + abs(c)
    return float(abs(num) / den) if den else 0.0


def _maybe_divides(F: IntPoly, d: int) -> bool:
    """Cheap numerical test that j(tau_d) is a root of F."""
    forms = reduced_forms(d)
    f0 = forms[0]
    coeff_bits = max(abs(c).bit_length() for c in F.int_coeffs())
    jbits = int(math.pi * math.sqrt(-d) / (f0.a * math.log(2))) + 16
    bits = coeff_bits + F.degree * jbits + 128
    with mpmath.workprec(bits):
        z = j_value(f0.a, f0.b, d, bits)
        return _relative_residual(F, z) < 2.0**-64


def extract_cm_factors(F: IntPoly, d_max: int, *, prime_budget: int = 40) -> Factorization:
    """Strip class polynomials H_d with |d| <= d_max from F, each to its maximal power."""
    if not F or not F.is_monic():
        raise ValueError("F must be monic and nonzero")
    rest = F
    found = []
    for d in discriminants(d_max):
        if rest.degree < 1:
            break
        if class_number(d) > rest.degree:
            continue
        if not _maybe_divides(rest, d):
            continue
        H = hilbert_class_poly(d)
        e = 0
        while rest.degree >= H.degree:
            q, r = divmod(rest, H)
            if r:
                break
            rest, e = q, e + 1
        if e:
            found.append((d, e))
    fac = Factorization(found, rest, UNIT if rest.degree == 0 else INCONCLUSIVE, d_max)
    if rest.degree > 0:
        fac.cofactor_status = certify_irreducible(rest, prime_budget)
    if fac.expand() != F:
        raise AssertionError("class polynomial extraction does not multiply back to F")
    return fac


def _subset_sums(degs: list[int]) -> set[int]:
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def certify_irreducible(F0: IntPoly, prime_budget: int = 40) -> str:
    """Degree-pattern certificate over good primes, with a bounded trial for factors."""
    n = F0.degree
    if n < 1:
        raise ValueError("irreducibility is undefined for constants")
    if n == 1:
        return IRREDUCIBLE
    F0 = F0.primitive()
    if poly_gcd(F0, F0.derivative()).degree > 0:
        return REDUCIBLE
    ints = F0.int_coeffs()
    lc = ints[-1]
    allowed = set(range(1, n))
    tried = 0
    for p in prime_pool(4 * prime_budget, seed=7919):
        if tried >= prime_budget:
            break
        if lc % p == 0:
            continue
        f = ModPoly(ints, p)
        if not is_squarefree(f):
            continue
        tried += 1
        degs = degree_pattern(f.monic())
        if len(degs) == 1:
            return IRREDUCIBLE
        allowed &= _subset_sums(degs)
        if not allowed:
            return IRREDUCIBLE
    if _has_rational_root(ints) or n <= SYMPY_FACTOR_DEGREE and _sympy_reducible(ints):
        return REDUCIBLE
    if n <= SYMPY_FACTOR_DEGREE:
        return IRREDUCIBLE  # full factorization over Z found one factor
    return INCONCLUSIVE


def _has_rational_root(ints: list[int], bound: int = 10_000) -> bool:
    """Trial of a/b with |a| <= bound dividing the constant term and b | lc."""
    if ints[0] == 0:
        return True
    lc = abs(ints[-1])
    dens = sympy.divisors(lc) if lc < 10**6 else [1]
    deg = len(ints) - 1
    for a in range(1, bound + 1):
        if ints[0] % a:
            continue
        for num in (a, -a):
            for den in dens:
                if math.gcd(a, den) != 1:
                    continue
                if sum(c * num**i * den ** (deg - i) for i, c in enumerate(ints)) == 0:
                    return True
    return False


def _sympy_reducible(ints: list[int]) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(ints)), x, domain="ZZ")
    _, factors = poly.factor_list()
    return sum(e for _, e in factors) > 1


def squarefree_part(d: int) -> int:
    sign = -1 if d < 0 else 1
    core = 1
    for ell, e in sympy.factorint(abs(d)).items():
        if e % 2:
            core *= ell
    return sign * core


def decide(curve, critical, fac: Factorization) -> Verdict:
    """Apply the two sufficient conditions for rank E_crit(Q) = 0, plus the cusp case."""
    notes = [f"class polynomials searched for |d| <= {fac.d_max}"]
    if not curve.rank_at_least_two:
        return Verdict(
            None,
            None,
            f"analytic rank {curve.analytic_rank} < 2: the criterion does not apply",
            notes,
        )
    F = critical.polynomial
    if F.degree == 0:
        if critical.cusp_degenerate:
            return Verdict(
                True,
                "cusp-degenerate",
                "F = 1: every critical point is a cusp, and cusps map to torsion points",
                notes,
            )
        return Verdict(None, None, "F = 1 but the curve has genus below 2", notes)
    if not fac.hilbert and fac.cofactor_status == IRREDUCIBLE:
        return Verdict(
            True,
            "thm1-cond-irreducible",
            f"F_{{E,{critical.function_tag}}} is irreducible of degree {F.degree}",
            notes,
        )
    if critical.function_tag != "j":
        return Verdict(
            None,
            None,
            f"F for h = {critical.function_tag} is not certified irreducible "
            f"({fac.cofactor_status}); the class polynomial rule needs h = j",
            notes,
        )
    cores = [squarefree_part(d) for d, _ in fac.hilbert]
    if len(set(cores)) != len(cores):
        return Verdict(
            None, None, "two class polynomial factors share an imaginary quadratic field", notes
        )
    if fac.cofactor_status != IRREDUCIBLE:
        what = "a unit" if fac.cofactor_status == UNIT else fac.cofactor_status
        return Verdict(None, None, f"cofactor after class polynomials is {what}", notes)
    return Verdict(
        True,
        "thm1-cond-cm-plus-irreducible",
        f"F_{{E,j}} = {fac.describe()} with distinct fields {sorted(set(cores))} "
        f"and an irreducible cofactor of degree {fac.cofactor.degree}",
        notes,
    )


def orbit_bound_report(fac: Factorization) -> int:
    """Number of distinct irreducible pieces (an upper bound on Galois orbits)."""
    count = len(fac.hilbert)
    if fac.cofactor.degree > 0:
        count += 1 if fac.cofactor_status == IRREDUCIBLE else fac.cofactor.degree
    return count

