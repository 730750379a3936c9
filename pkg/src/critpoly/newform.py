"""Curve data and the q-expansion of the attached newform."""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np
from sympy import factorint, primerange

from .config import atomic_write, cache_dir, curve_db_url
from .qseries import LaurentSeries


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class CurveData:
    label: str
    a_invariants: tuple[int, int, int, int, int]
    conductor: int
    analytic_rank: int | None = None

    def __post_init__(self):
        if len(self.a_invariants) != 5:
            raise CurveError("expected five a-invariants")
        disc = self.discriminant
        if disc == 0:
            raise CurveError(f"{self.label}: singular model (discriminant 0)")
        if self.conductor < 1:
            raise CurveError(f"{self.label}: conductor must be positive")
        bad = set(factorint(abs(disc)))
        stray = sorted(p for p in bad if self.conductor % p)
        if stray:
            raise CurveError(
                f"{self.label}: primes {stray} divide the discriminant but not N={self.conductor}"
            )
        missing = sorted(p for p in factorint(self.conductor) if p not in bad)
        if missing:
            raise CurveError(
                f"{self.label}: primes {missing} divide N={self.conductor} but not the discriminant"
            )

    @property
    def rank_at_least_two(self) -> bool:
        return self.analytic_rank is not None and self.analytic_rank >= 2

    @cached_property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.a_invariants
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "a_invariants": list(self.a_invariants),
            "conductor": self.conductor,
            "analytic_rank": self.analytic_rank,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CurveData":
        try:
            return cls(
                label=str(obj.get("label", "")),
                a_invariants=tuple(int(a) for a in obj["a_invariants"]),
                conductor=int(obj["conductor"]),
                analytic_rank=None if obj.get("analytic_rank") is None else int(obj["analytic_rank"]),
            )
        except (KeyError, TypeError) as exc:
            raise CurveError(f"malformed curve record: {exc}") from exc


def count_points_naive(curve: CurveData, p: int) -> int:
    """#E(F_p) including the point at infinity, by enumerating (x, y)."""
    a1, a2, a3, a4, a6 = curve.a_invariants
    n = 1
    for x in range(p):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


def a_p(curve: CurveData, p: int) -> int:
    """Trace of Frobenius p + 1 - #E(F_p) from the quadratic-character sum."""
    if p == 2:
        ap = 3 - count_points_naive(curve, 2)
    else:
        a1, a2, a3, a4, a6 = curve.a_invariants
        x = np.arange(p, dtype=np.int64)
        cubic = (((x + a2) % p * x % p + a4) % p * x % p + a6) % p
        lin = (a1 * x + a3) % p
        val = (4 * cubic + lin * lin % p) % p
        chi = -np.ones(p, dtype=np.int64)
        chi[(x[1:] * x[1:]) % p] = 1
        chi[0] = 0
        ap = -int(chi[val].sum())
    if curve.conductor % p:
        if ap * ap > 4 * p:
            raise ArithmeticError(f"Hasse bound violated at p={p}: a_p={ap}")
    elif abs(ap) > 1:
        raise ArithmeticError(f"bad prime {p} gave a_p={ap}; is the model minimal?")
    return ap


def newform_coefficients(curve: CurveData, M: int) -> list[int]:
    """[0, a_1, ..., a_M]."""
    N = curve.conductor
    a = [0] * (M + 1)
    if M >= 1:
        a[1] = 1
    spf = list(range(M + 1))
    for p in primerange(2, int(M**0.5) + 1):
        for k in range(p * p, M + 1, p):
            if spf[k] == k:
                spf[k] = p
    for p in primerange(2, M + 1):
        ap = a_p(curve, p)
        prev, cur = 1, ap
        pk = p
        while pk <= M:
            a[pk] = cur
            if N % p:
                prev, cur = cur, ap * cur - p * prev
            else:
                prev, cur = cur, ap * cur
            pk *= p
    for n in range(2, M + 1):
        p = spf[n]
        m, pk = n, 1
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            a[n] = a[pk] * a[m]
    return a


def _an_cache_path(curve: CurveData) -> Path:
    return cache_dir() / "an" / f"{curve.label}.txt"


def read_an_cache(curve: CurveData) -> list[int] | None:
    path = _an_cache_path(curve)
    if not curve.label or not path.exists():
        return None
    a = [0]
    for line in path.read_text().splitlines():
        n, v = line.split()
        if int(n) != len(a):
            return None
        a.append(int(v))
    return a


def write_an_cache(curve: CurveData, a: list[int]) -> None:
    text = "".join(f"{n} {a[n]}\n" for n in range(1, len(a)))
    atomic_write(_an_cache_path(curve), text)


def cached_coefficients(curve: CurveData, M: int, use_cache: bool = True) -> list[int]:
    if use_cache and curve.label:
        a = read_an_cache(curve)
        if a is not None and len(a) > M:
            return a[: M + 1]
    a = newform_coefficients(curve, M)
    if use_cache and curve.label:
        write_an_cache(curve, a)
    return a


def newform_series(curve: CurveData, M: int, use_cache: bool = False) -> LaurentSeries:
    """f = sum a_n q^n with coefficients up to q^M (precision M + 1)."""
    a = cached_coefficients(curve, M, use_cache)
    return LaurentSeries.from_ints(a, 0, M + 1)


# -- curve sources -------------------------------------------------------------


def packaged_fixture(label: str) -> Path | None:
    res = resources.files("critpoly") / "data" / "curves" / f"{label}.json"
    return Path(str(res)) if res.is_file() else None


def load_curve(source: str | Path, *, allow_remote: bool = False) -> CurveData:
    """Load from a fixture path or a label (cache, packaged data, remote)."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise FileNotFoundError(f"curve source not found: {path}")
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CurveError(f"{path}: malformed JSON ({exc})") from exc
        return CurveData.from_json(obj)
    label = str(source)
    cached = cache_dir() / "curves" / f"{label}.json"
    if cached.exists():
        return CurveData.from_json(json.loads(cached.read_text()))
    fixture = packaged_fixture(label)
    if fixture is not None:
        return CurveData.from_json(json.loads(fixture.read_text()))
    if allow_remote:
        return fetch_curve(label)
    raise FileNotFoundError(f"curve source not found: {label}")


def fetch_curve(label: str, url: str | None = None, timeout: float = 30.0) -> CurveData:
    """Fetch a curve record over HTTP and cache it under cache/curves/."""
    url = (url or curve_db_url()).format(label=label)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = json.loads(resp.read().decode())
    except (urllib.error.URLError, OSError) as exc:
        raise CurveError(f"network failure fetching {label} from {url}: {exc}") from exc
    curve = CurveData.from_json(_normalize_record(label, payload))
    atomic_write(cache_dir() / "curves" / f"{label}.json", json.dumps(curve.to_json(), indent=2) + "\n")
    return curve


def _normalize_record(label: str, payload) -> dict:
    """Accept either the fixture shape or an LMFDB API response."""
    if isinstance(payload, dict) and "a_invariants" in payload:
        return payload
    rows = payload.get("data") if isinstance(payload, dict) else payload
    if not rows:
        raise CurveError(f"no curve record for {label}")
    row = rows[0]
    return {
        "label": label,
        "a_invariants": row["ainvs"],
        "conductor": row["conductor"],
        "analytic_rank": row.get("analytic_rank", row.get("rank")),
    }
