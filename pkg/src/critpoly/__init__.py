"""Critical polynomials of elliptic curves over Q and the rank of E_crit(Q)."""

from .config import PipelineConfig
from .exact import IntPoly
from .newform import CurveData, load_curve
from .pipeline import CriticalPolynomial, compute_critical, poly_relation, poly_relation_yp

__all__ = [
    "CriticalPolynomial",
    "CurveData",
    "IntPoly",
    "PipelineConfig",
    "compute_critical",
    "load_curve",
    "poly_relation",
    "poly_relation_yp",
]
