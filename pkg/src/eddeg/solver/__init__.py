"""Critical-point systems for plane curves, bivariate parametrizations and
the Hurwitz determinants."""
from .bivariate import Cluster, solve_bivariate
from .curves import (CriticalPoint, CriticalReport, PlaneCurve, affine_vs_closure,
                     build_affine_system, build_projective_system, count_critical,
                     homogenization_lemma_residual)
from .hurwitz import hurwitz_count, hurwitz_polynomials
from .param import distance_function, param_critical_count

__all__ = [
    "Cluster", "solve_bivariate", "CriticalPoint", "CriticalReport", "PlaneCurve",
    "affine_vs_closure", "build_affine_system", "build_projective_system", "count_critical",
    "homogenization_lemma_residual", "hurwitz_count", "hurwitz_polynomials",
    "distance_function", "param_critical_count",
]
