"""Exact polynomial kernel."""
from .poly import MultiPoly, NEG_INF, parse_poly, to_text, poly_arith, partial_derivative, evaluate, poly_vars
from .univariate import RootBox, squarefree_part, sturm_count, isolate_roots, isolate_list, yun
from .resultant import PolyMatrix, resultant, polymatrix_det, det_cofactor, sylvester_matrix

__all__ = [
    "MultiPoly", "NEG_INF", "parse_poly", "to_text", "poly_arith", "partial_derivative",
    "evaluate", "poly_vars", "RootBox", "squarefree_part", "sturm_count", "isolate_roots",
    "isolate_list", "yun", "PolyMatrix", "resultant", "polymatrix_det", "det_cofactor",
    "sylvester_matrix",
]
