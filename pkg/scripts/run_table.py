"""Recompute reference rows and write one JSON report per curve.

    python scripts/run_table.py 37a 37b 44a --out reports/
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from critpoly.cli import check_row, reference_rows
from critpoly.config import PipelineConfig
from critpoly.newform import load_curve
from critpoly.report import analyze


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("labels", nargs="*", default=["37a", "37b", "44a", "48a", "67a", "89a"])
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--algorithm", default="auto")
    args = ap.parse_args()
    rows = reference_rows()
    for label in args.labels:
        t = time.perf_counter()
        rep = analyze(load_curve(label), PipelineConfig(algorithm=args.algorithm))
        rep.write(args.out / f"{label}.json")
        bad = check_row(label, rows[label], rep) if label in rows else ["no reference row"]
        status = "ok" if not bad else "; ".join(bad)
        print(f"{rep.table_line()}  [{time.perf_counter() - t:.1f}s] {status}", flush=True)


if __name__ == "__main__":
    main()
