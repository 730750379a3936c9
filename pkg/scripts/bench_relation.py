"""Time one mod-p image of each route for a curve.

    python scripts/bench_relation.py 44a
"""

import sys
import time

from critpoly.config import PipelineConfig
from critpoly.eta import choose_yang_h
from critpoly.exact.crt import prime_pool
from critpoly.gamma0 import invariants
from critpoly.newform import cached_coefficients, load_curve
from critpoly.pipeline import dense_image, dense_setup, yang_image

label = sys.argv[1] if len(sys.argv) > 1 else "37a"
curve = load_curve(label)
p = prime_pool(1)[0]

t = time.perf_counter()
setup = dense_setup(curve, PipelineConfig())
sig, F, _ = dense_image(setup, p)
print(f"dense  {label}: signature {sig}  {time.perf_counter() - t:.2f}s")

meta = choose_yang_h(curve.conductor)
an = cached_coefficients(curve, meta.m * meta.n + 2)
t = time.perf_counter()
sig, F = yang_image(an, meta, invariants(curve.conductor).genus, p)
print(f"yang   {label}: (m, n) = ({meta.m}, {meta.n}) deg F = {sig[0]}  {time.perf_counter() - t:.2f}s")
