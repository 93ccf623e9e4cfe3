# src/divergences/__init__.py
"""
f-divergences: the (f, f', f'', h, h') quintuples, first variation and divergence estimates.
"""

from .estimate import divergence_by_quadrature, dual_representation_terms, estimate_divergence_mc, gaussian_kl
from .f_divergence import FDivergence, NAMES, first_variation, make_divergence, parse_divergence

__all__ = [
    "FDivergence",
    "NAMES",
    "divergence_by_quadrature",
    "dual_representation_terms",
    "estimate_divergence_mc",
    "first_variation",
    "gaussian_kl",
    "make_divergence",
    "parse_divergence",
]
