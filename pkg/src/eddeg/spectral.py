"""Small dense SVD by Jacobi rotations, Eckart–Young critical points of the
bounded-rank matrix varieties, and a numeric check of ED duality between
rank r and rank s-r."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DomainError, StructuralError

TIE_TOL = 1e-8
MAX_SIZE = 32


@dataclass(frozen=True)
class MatrixData:
    s: int
    t: int
    entries: Tuple[float, ...]

    def __post_init__(self):
        if len(self.entries) != self.s * self.t:
            raise StructuralError("entry count does not match shape")
        if not np.all(np.isfinite(self.entries)):
            raise DomainError("matrix entries must be finite")

    @classmethod
    def from_array(cls, a) -> "MatrixData":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2:
            raise StructuralError("need a 2-d array")
        if a.shape[0] > a.shape[1]:
            raise DomainError("rows must not exceed columns (transpose the input)")
        return cls(a.shape[0], a.shape[1], tuple(a.ravel().tolist()))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(self.s, self.t)


@dataclass(frozen=True)
class SVDResult:
    left: np.ndarray            # s x s orthogonal
    singular_values: np.ndarray  # descending
    right: np.ndarray           # t x t orthogonal

    def reconstruct(self) -> np.ndarray:
        s, t = self.left.shape[0], self.right.shape[0]
        D = np.zeros((s, t))
        D[np.arange(s), np.arange(s)] = self.singular_values
        return self.left @ D @ self.right


def _as_data(U) -> MatrixData:
    return U if isinstance(U, MatrixData) else MatrixData.from_array(U)


def _complete_basis(Q: np.ndarray, t: int) -> np.ndarray:
    """Extend orthonormal columns (some may be zero) to an orthonormal basis of R^t."""
    cols = [Q[:, j] for j in range(Q.shape[1]) if np.linalg.norm(Q[:, j]) > 0.5]
    for e in np.eye(t):
        if len(cols) == t:
            break
        v = e.copy()
        for _ in range(2):
            for c in cols:
                v -= (c @ v) * c
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(v / nv)
    return np.column_stack(cols)


def jacobi_svd(U, tol: float = 1e-15, max_sweeps: int = 60) -> SVDResult:
    """One-sided (Hestenes) Jacobi on the columns of U^T, cyclic sweep order.

    U = left @ diag(sigma) @ right with sigma descending.
    """
    data = _as_data(U)
    s, t = data.s, data.t
    if t > MAX_SIZE:
        raise DomainError(f"matrices up to {MAX_SIZE} columns")
    B = data.array.T.copy()  # t x s, columns get orthogonalised
    J = np.eye(s)
    for _ in range(max_sweeps):
        rotated = False
        for i in range(s - 1):
            for j in range(i + 1, s):
                a = B[:, i] @ B[:, i]
                b = B[:, j] @ B[:, j]
                g = B[:, i] @ B[:, j]
                if abs(g) <= tol * np.sqrt(a * b) or g == 0.0:
                    continue
                rotated = True
                zeta = (b - a) / (2.0 * g)
                tt = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + tt * tt)
                sn = c * tt
                bi, bj = B[:, i].copy(), B[:, j].copy()
                B[:, i] = c * bi - sn * bj
                B[:, j] = sn * bi + c * bj
                ji, jj = J[:, i].copy(), J[:, j].copy()
                J[:, i] = c * ji - sn * jj
                J[:, j] = sn * ji + c * jj
        if not rotated:
            break
    sig = np.linalg.norm(B, axis=0)
    order = sorted(range(s), key=lambda k: (-sig[k], k))
    sig = sig[order]
    B = B[:, order]
    J = J[:, order]
    scale = max(sig[0] if s else 0.0, 1e-300)
    Q = np.zeros((t, s))
    for k in range(s):
        if sig[k] > 1e-14 * scale:
            Q[:, k] = B[:, k] / sig[k]
        else:
            sig[k] = 0.0
    if np.any(sig == 0.0):
        # re-orthonormalise with the zero columns filled in
        full = _complete_basis(Q[:, sig > 0], t)
        Q = np.column_stack([Q[:, sig > 0], full[:, int(np.sum(sig > 0)):]])[:, :t]
        T2 = Q.T
    else:
        T2 = _complete_basis(Q, t).T
    return SVDResult(J, sig, T2)


@dataclass(frozen=True)
class CriticalMatrix:
    subset: Tuple[int, ...]
    matrix: np.ndarray
    distance: float  # squared distance to U


def _check_generic(sig: np.ndarray):
    for i in range(len(sig) - 1):
        if abs(sig[i] - sig[i + 1]) <= TIE_TOL * max(1.0, sig[0]):
            raise DomainError("repeated singular values: data matrix is not generic")


def eckart_young_critical(U, r: int, svd: SVDResult | None = None) -> List[CriticalMatrix]:
    data = _as_data(U)
    s = data.s
    if not 1 <= r <= s:
        raise DomainError("need 1 <= r <= s")
    svd = svd or jacobi_svd(data)
    _check_generic(svd.singular_values)
    return _critical_list(data, svd, r)


def _critical_list(data: MatrixData, svd: SVDResult, r: int) -> List[CriticalMatrix]:
    s = data.s
    sig = svd.singular_values
    out = []
    for I in combinations(range(s), r):
        M = sum(sig[i] * np.outer(svd.left[:, i], svd.right[i, :]) for i in I) if I else np.zeros((s, data.t))
        dist = float(sum(sig[i] ** 2 for i in range(s) if i not in I))
        out.append(CriticalMatrix(I, M, dist))
    out.sort(key=lambda c: (c.distance, tuple(c.matrix.ravel())))
    return out


@dataclass(frozen=True)
class DualityReport:
    pairs: int
    orthogonality: float      # max |<U_I, U_{I^c}>|
    pythagoras: float         # max | |U|^2 - |U_I|^2 - |U_{I^c}|^2 |
    order_reversed: bool
    passed: bool

    def to_json(self) -> dict:
        return {"pairs": self.pairs, "orthogonality": self.orthogonality,
                "pythagoras": self.pythagoras, "order_reversed": self.order_reversed,
                "passed": self.passed}


def duality_check(U, r: int, tol: float = 1e-9) -> DualityReport:
    """Pair critical points of rank r with those of rank s-r via U_I -> U - U_I."""
    data = _as_data(U)
    s = data.s
    if not 1 <= r <= s:
        raise DomainError("need 1 <= r <= s")
    svd = jacobi_svd(data)
    _check_generic(svd.singular_values)
    A = data.array
    near = _critical_list(data, svd, r)
    far = _critical_list(data, svd, s - r)
    norm2 = float(np.sum(A * A))
    orth, pyth = 0.0, 0.0
    for c in near:
        comp = A - c.matrix
        orth = max(orth, abs(float(np.sum(c.matrix * comp))))
        pyth = max(pyth, abs(norm2 - float(np.sum(c.matrix ** 2)) - float(np.sum(comp ** 2))))
    reversed_ok = all(
        tuple(sorted(set(range(s)) - set(c.subset))) == d.subset
        for c, d in zip(near, reversed(far))
    )
    scale = max(norm2, 1.0)
    ok = orth <= tol * scale and pyth <= tol * scale and reversed_ok and len(near) == len(far)
    return DualityReport(len(near), orth, pyth, reversed_ok, ok)


def read_matrix(text: str) -> MatrixData:
    rows = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            rows.append([float(x) for x in s.split()])
        except ValueError:
            raise StructuralError("matrix file must contain decimal numbers") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise StructuralError("matrix rows must be non-empty and of equal length")
    a = np.array(rows)
    if a.shape[0] > a.shape[1]:
        a = a.T
    return MatrixData.from_array(a)
