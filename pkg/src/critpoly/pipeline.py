"""Critical polynomials F_{E,j} (dense relation) and F_{E,h} (Yang pair).

Both routes run prime by prime.  For each prime the relation is found mod
p, F is assembled mod p, and the integer coefficients of F are recovered
by CRT once an extra prime no longer changes the lift.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import modseries as ms
from .config import PipelineConfig
from .eta import EtaQuotient, choose_yang_h
from .exact.crt import CRTAccumulator, lift, primes_from
from .exact.intpoly import IntPoly
from .exact.modpoly import ModPoly
from .gamma0 import LevelInvariants, invariants
from .newform import CurveData, cached_coefficients
from .relations import BadPrime, min_approximant_mod_p, power_rows, yang_f0_mod_p

log = logging.getLogger(__name__)


class PipelineError(RuntimeError):
    pass


@dataclass
class CriticalPolynomial:
    polynomial: IntPoly
    function_tag: str
    label: str
    algorithm: str
    genus: int
    bookkeeping: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)

    @property
    def cusp_degenerate(self) -> bool:
        return self.polynomial.degree == 0 and self.genus >= 2


@dataclass(frozen=True)
class Plan:
    algorithm: str
    reason: str


def choose_algorithm(curve: CurveData, config: PipelineConfig | None = None) -> Plan:
    config = config or PipelineConfig()
    I = invariants(curve.conductor)
    if config.algorithm in ("dense", "yang"):
        if config.algorithm == "dense" and I.d_N > config.dense_threshold:
            warnings.warn(
                f"dense route forced at d_N={I.d_N}; expect a long run", RuntimeWarning, stacklevel=2
            )
        return Plan(config.algorithm, "forced by configuration")
    if config.algorithm != "auto":
        raise ValueError(f"unknown algorithm {config.algorithm!r}")
    if I.d_N <= config.dense_threshold:
        return Plan("dense", f"d_N={I.d_N} <= {config.dense_threshold}")
    return Plan("yang", f"d_N={I.d_N} > {config.dense_threshold}")


# -- mod-p assembly helpers ------------------------------------------------------


def _reverse_times_x(f: np.ndarray, shift: int, p: int) -> ModPoly:
    """rev(f)(x) * x^shift with exact division when shift < 0."""
    nz = np.flatnonzero(f)
    if not len(nz):
        raise BadPrime(p)
    deg = int(nz[-1])
    rev = f[: deg + 1][::-1].copy()
    if shift >= 0:
        return ModPoly(np.concatenate([np.zeros(shift, dtype=np.int64), rev]), p)
    if rev[: -shift].any():
        raise PipelineError(f"x^{-shift} does not divide the reversed f_0 (prime {p})")
    return ModPoly(rev[-shift:], p)


def _divide_power(F: ModPoly, root: int, e: int) -> ModPoly:
    if e < 0:
        raise PipelineError("negative power of (x - root) requested")
    lin = ModPoly([-root, 1], F.p)
    for i in range(e):
        q, r = divmod(F, lin)
        if r:
            raise PipelineError(
                f"(x-{root})^{e} does not divide the assembled polynomial "
                f"(stopped after {i}, prime {F.p})"
            )
        F = q
    return F


class _Lifter:
    """Accumulate monic mod-p images keyed by a degree signature."""

    def __init__(self, min_primes: int = 2):
        self.groups: dict[tuple, tuple[CRTAccumulator, list[int], list | None]] = {}
        self.min_primes = min_primes

    def add(self, sig: tuple, coeffs: list[int], p: int) -> list[Fraction] | None:
        if sig not in self.groups:
            self.groups[sig] = (CRTAccumulator(len(coeffs)), [], None)
        acc, plist, prev = self.groups[sig]
        acc.add(coeffs, p)
        plist.append(p)
        cur = lift(acc.values, acc.modulus)
        self.groups[sig] = (acc, plist, cur)
        top = max(self.groups, key=lambda s: len(self.groups[s][1]))
        if sig == top and cur is not None and prev is not None and cur == prev:
            if len(plist) >= self.min_primes:
                return cur
        return None

    def summary(self) -> dict:
        return {str(k): len(v[1]) for k, v in self.groups.items()}


# -- dense route ---------------------------------------------------------------------


@dataclass
class DenseSetup:
    curve: CurveData
    inv: LevelInvariants
    T: int
    n: int  # deg u = d_N, x-degree bound
    D: int  # deg r1, y-degree bound
    M: int  # order in u before the u^(nT) shift
    A_const: Fraction  # A = deg f_n - A_const
    B: int
    an: list[int]


def dense_setup(curve: CurveData, config: PipelineConfig) -> DenseSetup:
    I = invariants(curve.conductor)
    T = 2 * I.genus - 2 if config.t_exponent is None else config.t_exponent
    if T < 0:
        raise PipelineError("T must be nonnegative")
    n = I.d_N
    D = (T + 1) * I.d_N - I.c_N
    M = config.terms if config.terms is not None else 2 * D * n + 1
    A_const = T * I.d_N + Fraction(I.d_N + 2 * I.eps3, 3)
    B = Fraction(-(I.d_N + I.eps2), 2)
    if A_const.denominator != 1 or B.denominator != 1:
        raise PipelineError("non-integral exponent bookkeeping")
    an = cached_coefficients(curve, M + n * T + 1, config.use_cache)
    return DenseSetup(curve, I, T, n, D, M, A_const, int(B), an)


def r_in_u(an: list[int], p: int, L: int) -> np.ndarray:
    """r = j(j-1728) f / (q dj/dq) as a power series in u = 1/j, mod p.

    With q = Q(u): r(u) = -(1 - 1728u) Q'(u) g(Q(u)), g = f/q.
    """
    Q = ms.j_inverse(p, L + 1)
    g = np.array([an[k + 1] % p for k in range(L)], dtype=np.int64)
    gQ = ms.compose(g, Q[:L], p, L)
    dQ = ms.derivative(Q, p)[:L]
    lin = np.zeros(2, dtype=np.int64)
    lin[0], lin[1] = 1, (-1728) % p
    R = ms.mul(ms.mul(dQ, gQ, p, L), lin, p, L)
    return (-R) % p


def dense_image(setup: DenseSetup, p: int) -> tuple[tuple, ModPoly, dict]:
    """F mod p from one prime, with its degree signature."""
    s = setup
    L = s.M + s.n * s.T
    R = r_in_u(s.an, p, L)
    rows = power_rows(R, s.n, p, L, shift=s.T)
    res = min_approximant_mod_p(rows, p, s.D)
    f0 = res.coeffs[0]
    fn = res.coeffs[res.degx]
    nz0 = np.flatnonzero(f0)
    if not len(nz0):
        raise BadPrime(p)
    deg_f0 = int(nz0[-1])
    deg_fn = int(np.flatnonzero(fn)[-1])
    A = deg_fn - int(s.A_const)
    F = _reverse_times_x(f0, A - deg_f0, p)
    F = _divide_power(F, 1728 % p, -s.B).monic()
    sig = (res.degx, res.degy, deg_f0, deg_fn, F.degree)
    info = {"degx": res.degx, "degy": res.degy, "deg_f0": deg_f0, "deg_fn": deg_fn, "A": A}
    return sig, F, info


def poly_relation(curve: CurveData, config: PipelineConfig | None = None) -> CriticalPolynomial:
    """Dense route: F_{E,j} from the minimal relation between r_1 and u."""
    config = config or PipelineConfig()
    t0 = time.perf_counter()
    s = dense_setup(curve, config)
    timings = {"setup": (time.perf_counter() - t0) * 1e3}
    lifter = _Lifter()
    infos: dict[tuple, dict] = {}
    result = None
    used = 0
    t1 = time.perf_counter()
    for p in primes_from(config.seed):
        used += 1
        if used > config.max_primes:
            break
        try:
            sig, F, info = dense_image(s, p)
        except BadPrime:
            continue
        infos.setdefault(sig, info)
        log.info("prime %d: signature %s", p, sig)
        result = lifter.add(sig, F.coeffs(), p)
        if result is not None:
            break
    timings["relation"] = (time.perf_counter() - t1) * 1e3
    if result is None:
        raise PipelineError(f"F did not stabilize within {config.max_primes} primes")
    sig = max(lifter.groups, key=lambda k: len(lifter.groups[k][1]))
    info = infos[sig]
    F = IntPoly(result)
    if not F.is_monic():
        raise PipelineError("assembled polynomial is not monic")
    g = s.inv.genus
    if F.degree > 2 * g - 2:
        raise PipelineError(f"deg F = {F.degree} exceeds 2g-2 = {2 * g - 2}")
    cusp_cancel = info["degy"] < s.D
    if not cusp_cancel and F.degree != 2 * g - 2:
        warnings.warn("full-degree relation but deg F < 2g-2", RuntimeWarning, stacklevel=2)
    book = {
        "T": s.T,
        "M": s.M,
        "d_N": s.inv.d_N,
        "c_N": s.inv.c_N,
        "deg_r1": s.D,
        "deg_u": s.n,
        "A": info["A"],
        "B": s.B,
        "relation_degx": info["degx"],
        "relation_degy": info["degy"],
        "deg_f0": info["deg_f0"],
        "deg_fn": info["deg_fn"],
        "cusp_cancellation": cusp_cancel,
        "primes_used": len(lifter.groups[sig][1]),
        "signatures": lifter.summary(),
    }
    return CriticalPolynomial(F, "j", curve.label, "dense", g, book, timings)


# -- Yang route ----------------------------------------------------------------------


def yang_series_mod_p(an: list[int], meta, p: int, L: int) -> tuple[np.ndarray, np.ndarray]:
    """q^m g~ and q^n h~ mod p, with L coefficients each.

    With J = q j and K = q dj/dq * q:  r = J (J - 1728 q) (f/q) / K.
    """
    J = ms.jq(p, L)
    K = (ms.theta(J, p) - J) % p
    if K[0] == 0:
        raise BadPrime(p)
    lin = np.zeros(2, dtype=np.int64)
    lin[1] = (-1728) % p
    jj = ms.mul(J, (J + ms.pad(lin, L)) % p, p, L)
    g = np.array([an[k + 1] % p for k in range(L)], dtype=np.int64)
    r = ms.mul(ms.mul(jj, g, p, L), ms.inverse(K, p, L), p, L)
    h = meta.h.unit_mod_p(p, L)
    if meta.use_j:
        h = ms.mul(h, J, p, L)
    G = (meta.x_scale * ms.mul(r, h, p, L)) % p
    H = ms.mul(jj, h, p, L)
    return G, H


def yang_image(an, meta, genus: int, p: int) -> tuple[tuple, ModPoly]:
    m, n = meta.m, meta.n
    L = m * n + 1
    G, H = yang_series_mod_p(an, meta, p, L)
    if G[0] != 1 or H[0] != 1:
        raise BadPrime(p)
    f0 = yang_f0_mod_p(G, H, m, n, p)
    shift = m - (2 * genus - 2)
    if shift < 0:
        raise PipelineError(f"deg h = {m} is below 2g-2 = {2 * genus - 2}")
    if f0[:shift].any():
        raise PipelineError(f"x^{shift} does not divide f_0 (prime {p})")
    F = ModPoly(f0[shift:], p).monic()
    return (F.degree,), F


def function_tag(meta) -> str:
    jpow = "j^2" if meta.use_j else "j"
    return f"{jpow}(j-1728)*eta[{meta.h}]"


def poly_relation_yp(curve: CurveData, config: PipelineConfig | None = None) -> CriticalPolynomial:
    """Yang route: F_{E,h~} from the Yang pair (r h, j(j-1728) h)."""
    config = config or PipelineConfig()
    t0 = time.perf_counter()
    I = invariants(curve.conductor)
    eta = None
    if config.eta_exponents:
        eta = EtaQuotient.parse(curve.conductor, config.eta_exponents)
    meta = choose_yang_h(curve.conductor, cusp_multiplier=config.cusp_multiplier, eta=eta)
    L = meta.m * meta.n + 1
    an = cached_coefficients(curve, L + 1, config.use_cache)
    timings = {"setup": (time.perf_counter() - t0) * 1e3}
    lifter = _Lifter()
    result = None
    t1 = time.perf_counter()
    for used, p in enumerate(primes_from(config.seed), start=1):
        if used > config.max_primes:
            break
        try:
            sig, F = yang_image(an, meta, I.genus, p)
        except BadPrime:
            continue
        log.info("prime %d: signature %s", p, sig)
        result = lifter.add(sig, F.coeffs(), p)
        if result is not None:
            break
    timings["relation"] = (time.perf_counter() - t1) * 1e3
    if result is None:
        raise PipelineError(f"F did not stabilize within {config.max_primes} primes")
    sig = max(lifter.groups, key=lambda k: len(lifter.groups[k][1]))
    F = IntPoly(result)
    if not F.is_monic():
        raise PipelineError("assembled polynomial is not monic")
    book = {
        "m": meta.m,
        "n": meta.n,
        "M": L,
        "deg_h": meta.deg_h,
        "eta": str(meta.h),
        "use_j": meta.use_j,
        "x_scale": meta.x_scale,
        "primes_used": len(lifter.groups[sig][1]),
        "signatures": lifter.summary(),
    }
    return CriticalPolynomial(F, function_tag(meta), curve.label, "yang", I.genus, book, timings)


def compute_critical(curve: CurveData, config: PipelineConfig | None = None) -> CriticalPolynomial:
    config = config or PipelineConfig()
    plan = choose_algorithm(curve, config)
    if plan.algorithm == "dense":
        return poly_relation(curve, config)
    return poly_relation_yp(curve, config)
