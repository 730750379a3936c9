"""critpoly command line: compute, classpoly, invariants, eta-divisor, verify-paper, fetch-curve."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

import sympy

from .classpoly import ClassPolyError, hilbert_class_poly
from .config import PipelineConfig, atomic_write
from .eta import EtaError, EtaQuotient
from .gamma0 import invariants
from .newform import CurveError, fetch_curve, load_curve
from .pipeline import PipelineError
from .relations import RelationError
from .report import analyze

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

log = logging.getLogger("critpoly")


class UsageError(ValueError):
    pass


def reference_rows() -> dict:
    text = (resources.files("critpoly") / "data" / "reference_tables.json").read_text()
    return json.loads(text)["rows"]


def _set_threads(n: int) -> None:
    import numba

    numba.config.THREADING_LAYER = "workqueue"
    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def _config(args) -> PipelineConfig:
    t = args.t_exponent
    return PipelineConfig(
        algorithm=args.algorithm,
        terms=args.terms,
        t_exponent=None if t == "full" else int(t),
        seed=args.seed,
        max_primes=args.max_primes,
        cusp_multiplier=args.cusp_multiplier,
        eta_exponents=args.eta,
        use_cache=not args.no_cache,
        threads=args.threads,
    )


def _source(args) -> str:
    src = args.fixture or args.label or args.source
    if not src:
        raise UsageError("give a curve label, --label or --fixture")
    return src


def cmd_compute(args) -> int:
    curve = load_curve(_source(args), allow_remote=args.allow_remote)
    if args.label and args.fixture and curve.label != args.label:
        log.warning("fixture label %s differs from --label %s", curve.label, args.label)
    rep = analyze(curve, _config(args), d_max=args.dmax)
    out = Path(args.out) if args.out else Path("reports") / f"{curve.label}.json"
    rep.write(out)
    print(rep.table_line())
    v = rep.verdict
    status = "rank 0 proved" if v.proved else "inconclusive"
    print(f"verdict: {status} ({v.rule or 'no rule'}): {v.explanation}")
    print(f"report: {out}")
    return EXIT_OK


def cmd_classpoly(args) -> int:
    H = hilbert_class_poly(args.disc, use_cache=not args.no_cache)
    text = str(H)
    if args.out:
        atomic_write(Path(args.out), text + "\n")
    print(text)
    return EXIT_OK


def cmd_invariants(args) -> int:
    I = invariants(args.N)
    print(f"N = {I.N}")
    print(f"d_N = {I.d_N}  eps2 = {I.eps2}  eps3 = {I.eps3}  c_N = {I.c_N}  genus = {I.genus}")
    for c in I.cusps:
        print(f"  cusp {c.label:>10}  width {c.width}")
    return EXIT_OK


def cmd_eta_divisor(args) -> int:
    h = EtaQuotient.parse(args.N, args.exponents)
    ok, reasons = h.ligozat()
    print(f"h = eta[{h}] on X_0({args.N})")
    print("admissible" if ok else "not admissible: " + "; ".join(reasons))
    print(f"Div(h) = {h.divisor()}")
    return EXIT_OK


def check_row(label: str, row: dict, rep) -> list[str]:
    """Differences between a report and a reference row (empty when they agree)."""
    bad = []
    fac = rep.factorization
    want = sorted((d, e) for d, e in row["hilbert"])
    if sorted(fac.hilbert) != want:
        bad.append(f"class polynomial factors {fac.hilbert} != {want}")
    if fac.cofactor.degree != row["cofactor_degree"]:
        bad.append(f"cofactor degree {fac.cofactor.degree} != {row['cofactor_degree']}")
    for k, v in row.get("coefficients", {}).items():
        got = fac.cofactor[int(k)] if fac.cofactor.degree >= int(k) else None
        if got != int(v):
            bad.append(f"x^{k} coefficient {got} != {v}")
    if "constant_factorization" in row:
        got = {str(p): e for p, e in sympy.factorint(abs(int(rep.F[0]))).items()}
        if got != {k: v for k, v in row["constant_factorization"].items()}:
            bad.append(f"constant term factors {got}")
    if "cofactor_status" in row and fac.cofactor_status != row["cofactor_status"]:
        bad.append(f"cofactor status {fac.cofactor_status}")
    if row.get("rank_zero_proved") and not rep.verdict.proved:
        bad.append("rank 0 not proved")
    return bad


def cmd_verify_paper(args) -> int:
    rows = reference_rows()
    if args.only:
        labels = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in labels if s not in rows]
        if unknown:
            raise UsageError(f"no reference row for {', '.join(unknown)}")
        gated = [s for s in labels if rows[s].get("extended") and not args.extended]
        if gated:
            raise UsageError(f"rows {', '.join(gated)} need --extended")
    else:
        labels = [s for s, r in rows.items() if args.extended or not r.get("extended")]
    failed = 0
    for label in labels:
        row = rows[label]
        cfg = PipelineConfig(use_cache=not args.no_cache)
        if row["function"] != "j":
            cfg.algorithm = "yang"
            cfg.eta_exponents = row["function"]
        try:
            curve = load_curve(label, allow_remote=args.allow_remote)
            rep = analyze(curve, cfg)
            bad = check_row(label, row, rep)
        except (FileNotFoundError, CurveError, PipelineError, RelationError, EtaError) as exc:
            bad = [f"{type(exc).__name__}: {exc}"]
        failed += bool(bad)
        print(f"{'PASS' if not bad else 'FAIL'} {label}" + ("" if not bad else ": " + "; ".join(bad)))
        sys.stdout.flush()
    print(f"{len(labels) - failed}/{len(labels)} rows pass")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_fetch_curve(args) -> int:
    curve = fetch_curve(args.label, url=args.url)
    print(json.dumps(curve.to_json(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="critpoly", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--cache-dir", help="cache root (default $CRITPOLY_CACHE_DIR or ./cache)")
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="critical polynomial, factorization and verdict")
    c.add_argument("source", nargs="?", help="curve label or fixture path")
    c.add_argument("--label")
    c.add_argument("--fixture", help="JSON fixture with label, a_invariants, conductor, analytic_rank")
    c.add_argument("--algorithm", choices=["auto", "dense", "yang"], default="auto")
    c.add_argument("--terms", type=int, help="override the relation precision M")
    c.add_argument("--t-exponent", default="0", help="T for the dense route; 'full' means 2g-2")
    c.add_argument("--dmax", type=int, help="largest |d| tried for class polynomials (default 4N)")
    c.add_argument("--eta", help='fixed eta quotient h for the Yang route, "d:r,d:r"')
    c.add_argument("--cusp-multiplier", type=int)
    c.add_argument("--seed", type=int, default=PipelineConfig.seed)
    c.add_argument("--max-primes", type=int, default=PipelineConfig.max_primes)
    c.add_argument("--out")
    c.add_argument("--no-cache", action="store_true")
    c.add_argument("--allow-remote", action="store_true")
    c.set_defaults(func=cmd_compute)

    h = sub.add_parser("classpoly", help="Hilbert class polynomial H_d")
    h.add_argument("--disc", type=int, required=True)
    h.add_argument("--out")
    h.add_argument("--no-cache", action="store_true")
    h.set_defaults(func=cmd_classpoly)

    i = sub.add_parser("invariants", help="d_N, elliptic points, cusps and genus of X_0(N)")
    i.add_argument("N", type=int)
    i.set_defaults(func=cmd_invariants)

    e = sub.add_parser("eta-divisor", help="cusp divisor of an eta quotient")
    e.add_argument("N", type=int)
    e.add_argument("exponents", help='"d:r,d:r,..."')
    e.set_defaults(func=cmd_eta_divisor)

    v = sub.add_parser("verify-paper", help="recompute the reference tables")
    v.add_argument("--only", help="comma separated labels")
    v.add_argument("--extended", action="store_true", help="include the long rows")
    v.add_argument("--no-cache", action="store_true")
    v.add_argument("--allow-remote", action="store_true")
    v.set_defaults(func=cmd_verify_paper)

    f = sub.add_parser("fetch-curve", help="download a curve record into the cache")
    f.add_argument("label")
    f.add_argument("--url", help="URL template with {label}")
    f.set_defaults(func=cmd_fetch_curve)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.cache_dir:
        os.environ["CRITPOLY_CACHE_DIR"] = args.cache_dir
    try:
        _set_threads(args.threads)
        return args.func(args)
    except (
        UsageError,
        FileNotFoundError,
        CurveError,
        ClassPolyError,
        EtaError,
        PipelineError,
        RelationError,
        ValueError,
    ) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
