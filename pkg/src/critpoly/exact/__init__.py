from .crt import (
    CRTAccumulator,
    crt_reconstruct,
    lift,
    prime_pool,
    primes_from,
    rational_reconstruct,
)
from .intpoly import IntPoly, format_poly, parse_poly, poly_gcd
from .modpoly import (
    ModPoly,
    degree_pattern,
    distinct_degree,
    factor_mod_p,
    is_squarefree,
    mod_gcd,
    squarefree_decomposition,
)

__all__ = [
    "CRTAccumulator",
    "IntPoly",
    "ModPoly",
    "crt_reconstruct",
    "degree_pattern",
    "distinct_degree",
    "factor_mod_p",
    "format_poly",
    "is_squarefree",
    "lift",
    "mod_gcd",
    "parse_poly",
    "poly_gcd",
    "prime_pool",
    "primes_from",
    "rational_reconstruct",
    "squarefree_decomposition",
]
