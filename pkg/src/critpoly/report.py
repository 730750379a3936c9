"""JSON reports for one curve; big integers travel as decimal strings."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .config import atomic_write
from .exact.intpoly import IntPoly
from .pipeline import CriticalPolynomial, compute_critical
from .verdict import Factorization, Verdict, decide, extract_cm_factors, orbit_bound_report


@dataclass
class CriticalReport:
    label: str
    conductor: int
    genus: int
    algorithm: str
    function_tag: str
    F: IntPoly
    factorization: Factorization
    verdict: Verdict
    trace: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)
    orbit_bound: int = 0

    @classmethod
    def build(cls, curve, crit: CriticalPolynomial, fac: Factorization, verdict: Verdict, orbit_bound: int):
        return cls(
            label=curve.label,
            conductor=curve.conductor,
            genus=crit.genus,
            algorithm=crit.algorithm,
            function_tag=crit.function_tag,
            F=crit.polynomial,
            factorization=fac,
            verdict=verdict,
            trace=dict(crit.bookkeeping),
            timings_ms={k: round(v, 3) for k, v in crit.timings_ms.items()},
            orbit_bound=orbit_bound,
        )

    def to_json(self) -> dict:
        fac = self.factorization
        return {
            "label": self.label,
            "conductor": self.conductor,
            "genus": self.genus,
            "algorithm": self.algorithm,
            "function_tag": self.function_tag,
            "F": {"degree": self.F.degree, "coeffs": [str(c) for c in self.F.int_coeffs()]},
            "factorization": {
                "hilbert": [{"disc": d, "exp": e} for d, e in fac.hilbert],
                "cofactor": {
                    "degree": fac.cofactor.degree,
                    "coeffs": [str(c) for c in fac.cofactor.int_coeffs()],
                    "status": fac.cofactor_status,
                },
                "d_max": fac.d_max,
            },
            "verdict": asdict(self.verdict),
            "trace": _jsonable(self.trace),
            "orbit_bound": self.orbit_bound,
            "timings_ms": self.timings_ms,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CriticalReport":
        f = obj["factorization"]
        fac = Factorization(
            [(h["disc"], h["exp"]) for h in f["hilbert"]],
            IntPoly([int(c) for c in f["cofactor"]["coeffs"]]),
            f["cofactor"]["status"],
            f.get("d_max", 0),
        )
        v = obj["verdict"]
        return cls(
            label=obj["label"],
            conductor=obj["conductor"],
            genus=obj["genus"],
            algorithm=obj["algorithm"],
            function_tag=obj["function_tag"],
            F=IntPoly([int(c) for c in obj["F"]["coeffs"]]),
            factorization=fac,
            verdict=Verdict(v["proved"], v["rule"], v["explanation"], list(v.get("notes", []))),
            trace=obj.get("trace", {}),
            timings_ms=obj.get("timings_ms", {}),
            orbit_bound=obj.get("orbit_bound", 0),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def write(self, path: Path) -> None:
        atomic_write(Path(path), self.dumps())

    @classmethod
    def read(cls, path: Path) -> "CriticalReport":
        return cls.from_json(json.loads(Path(path).read_text()))

    def table_line(self) -> str:
        h = "j" if self.function_tag == "j" else self.function_tag
        return f"{self.label} | g={self.genus} | h={h} | {self.factorization.describe()}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, int) and not isinstance(obj, bool) and abs(obj) >= 2**53:
        return str(obj)
    if hasattr(obj, "numerator") and not isinstance(obj, int):
        return str(obj)
    return obj


def analyze(curve, config=None, d_max: int | None = None, prime_budget: int = 40) -> CriticalReport:
    """Compute F, factor it against class polynomials and decide."""
    crit = compute_critical(curve, config)
    t0 = time.perf_counter()
    d_max = 4 * curve.conductor if d_max is None else d_max
    fac = extract_cm_factors(crit.polynomial, d_max, prime_budget=prime_budget)
    crit.timings_ms["factor"] = (time.perf_counter() - t0) * 1e3
    verdict = decide(curve, crit, fac)
    return CriticalReport.build(curve, crit, fac, verdict, orbit_bound_report(fac))
