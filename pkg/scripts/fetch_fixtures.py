"""Populate curve fixtures (a-invariants, conductor, analytic rank) from a curve database.

    python scripts/fetch_fixtures.py                 # every reference label
    python scripts/fetch_fixtures.py 389a 664a --dest src/critpoly/data/curves

The URL template comes from $CRITPOLY_CURVE_DB_URL when set.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from critpoly.cli import reference_rows
from critpoly.config import atomic_write
from critpoly.newform import CurveError, fetch_curve

DEFAULT_DEST = Path(__file__).resolve().parents[1] / "src" / "critpoly" / "data" / "curves"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("labels", nargs="*")
    ap.add_argument("--dest", type=Path, default=DEFAULT_DEST)
    ap.add_argument("--url")
    ap.add_argument("--overwrite", action="store_true")
    args = ap.parse_args(argv)
    labels = args.labels or list(reference_rows())
    failures = 0
    for label in labels:
        out = args.dest / f"{label}.json"
        if out.exists() and not args.overwrite:
            print(f"keep   {label}")
            continue
        try:
            curve = fetch_curve(label, url=args.url)
        except CurveError as exc:
            print(f"FAILED {label}: {exc}", file=sys.stderr)
            failures += 1
            continue
        atomic_write(out, json.dumps(curve.to_json(), indent=2) + "\n")
        print(f"wrote  {label}: N={curve.conductor} ainvs={list(curve.a_invariants)} rank={curve.analytic_rank}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
