"""Reference-only datasets. These values are quoted, not computed here; every
table carries ``source: reference`` so they are never confused with output
of the solvers."""
from __future__ import annotations

from typing import Dict

from .errors import DomainError

TABLES: Dict[str, dict] = {
    "multiview": {
        "description": "ED degree of the affine multiview variety X_n (n cameras)",
        "columns": ["n", "ed_degree"],
        "rows": [[2, 6], [3, 47], [4, 148], [5, 336], [6, 638], [7, 1081]],
    },
    "symmetric_rank": {
        "description": "ED degree of symmetric s x s matrices of rank <= r, usual coordinates",
        "columns": ["r", "s", "ed_degree"],
        "rows": [
            [1, 2, 4], [1, 3, 13], [1, 4, 40], [1, 5, 121], [1, 6, 364], [1, 7, 1093],
            [2, 3, 13], [2, 4, 122], [2, 5, 1042], [2, 6, 8683], [2, 7, 72271],
            [3, 4, 40], [3, 5, 1042], [3, 6, 23544], [3, 7, 510835],
            [4, 5, 121], [4, 6, 8683], [4, 7, 510835],
            [5, 6, 364], [5, 7, 72271],
            [6, 7, 1093],
        ],
    },
    "determinantal": {
        "description": "ED degree of s x t matrices of rank <= r in general coordinates",
        "columns": ["r", "s", "t", "ed_degree"],
        "rows": [
            [1, 2, 2, 6], [1, 2, 3, 10], [1, 2, 4, 14], [1, 2, 5, 18], [1, 3, 3, 39],
            [1, 3, 4, 83], [1, 3, 5, 143], [1, 4, 4, 284], [1, 4, 5, 676], [1, 5, 5, 2205],
            [2, 3, 3, 39], [2, 3, 4, 83], [2, 3, 5, 143], [2, 4, 4, 1350], [2, 4, 5, 4806],
            [2, 5, 5, 55010],
            [3, 4, 4, 284], [3, 4, 5, 676], [3, 5, 5, 55010],
            [4, 5, 5, 2205],
        ],
    },
    "aed_tensor": {
        "description": "average ED degree of rank-one tensors (Gaussian data) next to the ED degree",
        "columns": ["format", "average_ed_degree", "ed_degree"],
        "rows": [
            ["2x2x2", 4.287, 6], ["2^4", 11.06, 24], ["2^5", 31.56, 120], ["2^6", 98.82, 720],
            ["2^7", 333.9, 5040], ["2^8", 1206.0, 40320], ["2^9", 4611.0, 362880],
            ["2^10", 18430.0, 3628800],
            ["2x2x3", 5.604, 8], ["2x2x4", 5.556, 8], ["2x2x5", 5.536, 8],
            ["2x3x3", 8.817, 15], ["2x3x4", 10.39, 18], ["2x3x5", 10.28, 18],
            ["3x3x3", 16.03, 37], ["3x3x4", 21.28, 55], ["3x3x5", 23.13, 61],
        ],
    },
    "hurwitz": {
        "description": "ED degrees and average ED degrees of small Hurwitz determinants",
        "columns": ["n", "ed_affine", "ed_homogeneous", "aed_affine", "aed_homogeneous"],
        "rows": [
            [3, 5, 2, 1.162, 2.0], [4, 5, 10, 1.883, 2.068], [5, 13, 6, 2.142, 3.052],
            [6, 9, 18, 2.416, 3.53], [7, 21, 10, 2.66, 3.742],
        ],
    },
}


def reference_table(name: str) -> dict:
    if name not in TABLES:
        raise DomainError(f"unknown table {name!r}; available: {', '.join(sorted(TABLES))}")
    t = TABLES[name]
    return {"name": name, "source": "reference", "description": t["description"],
            "columns": list(t["columns"]), "rows": [list(r) for r in t["rows"]]}
