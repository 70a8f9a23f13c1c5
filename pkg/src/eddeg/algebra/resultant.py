"""Resultants via the subresultant pseudo-remainder sequence, and
determinants of polynomial matrices."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import List, Sequence

from ..errors import DomainError, StructuralError
from .poly import MultiPoly


def _deg(A: List[MultiPoly]) -> int:
    return len(A) - 1


def _trim(A: List[MultiPoly]) -> List[MultiPoly]:
    A = list(A)
    while A and A[-1].is_zero():
        A.pop()
    return A


def _prem(A: List[MultiPoly], B: List[MultiPoly]) -> List[MultiPoly]:
    """lc(B)^(deg A - deg B + 1) * A mod B with coefficients in a polynomial ring."""
    r = list(A)
    lb = B[-1]
    nb = len(B)
    e = len(r) - nb + 1
    while len(r) >= nb and r:
        c = r[-1]
        k = len(r) - nb
        r = [x * lb for x in r]
        for j in range(nb):
            r[k + j] = r[k + j] - c * B[j]
        r.pop()
        e -= 1
        r = _trim(r)
    if e > 0 and r:
        f = lb ** e
        r = [x * f for x in r]
    return r


def subresultant_prs(A: List[MultiPoly], B: List[MultiPoly]):
    """Resultant of two polynomials given as coefficient lists in the
    eliminated variable (constant first). Coefficients live in Q[other vars].
    """
    ar = A[0].arity if A else B[0].arity
    one = MultiPoly.const(1, ar)
    if not A or not B:
        return MultiPoly.const(0, ar)
    s = 1
    if _deg(A) < _deg(B):
        A, B = B, A
        if _deg(A) % 2 and _deg(B) % 2:
            s = -1
    if _deg(B) == 0:
        return B[0] ** _deg(A) * s
    g, h = one, one
    while True:
        delta = _deg(A) - _deg(B)
        if _deg(A) % 2 and _deg(B) % 2:
            s = -s
        R = _prem(A, B)
        A = B
        div = g * h ** delta
        B = [c.exact_div(div) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))
        if not B:
            return MultiPoly.const(0, ar)
        if _deg(B) == 0:
            break
    dA = _deg(A)
    lB = B[0]
    if dA == 0:
        hfin = one
    elif dA == 1:
        hfin = lB
    else:
        hfin = (lB ** dA).exact_div(h ** (dA - 1))
    return hfin * s


def resultant(f: MultiPoly, g: MultiPoly, eliminated_var: int) -> MultiPoly:
    """Res_{x_v}(f, g); equals the Sylvester determinant with f's rows first."""
    if f.arity != g.arity:
        raise StructuralError("arity mismatch")
    if f.is_zero() and g.is_zero():
        raise DomainError("both polynomials are zero")
    if f.is_zero() or g.is_zero():
        raise DomainError("zero polynomial has no positive degree")
    if f.degree_in(eliminated_var) < 1 or g.degree_in(eliminated_var) < 1:
        raise DomainError("both polynomials need positive degree in the eliminated variable")
    A = f.coeffs_in(eliminated_var)
    B = g.coeffs_in(eliminated_var)
    return subresultant_prs(A, B)


def sylvester_matrix(f: MultiPoly, g: MultiPoly, v: int) -> "PolyMatrix":
    A = f.coeffs_in(v)[::-1]
    B = g.coeffs_in(v)[::-1]
    m, n = len(A) - 1, len(B) - 1
    N = m + n
    zero = MultiPoly.const(0, f.arity)
    rows = []
    for i in range(n):
        rows.append([zero] * i + A + [zero] * (N - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + B + [zero] * (N - n - 1 - i))
    return PolyMatrix.from_rows(rows)


# ------------------------------------------------------------ matrices

@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise StructuralError("entry count does not match shape")
        if self.entries and len({e.arity for e in self.entries}) != 1:
            raise StructuralError("entries must share one arity")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MultiPoly]]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise StructuralError("ragged rows")
        return cls(r, c, tuple(x for row in rows for x in row))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_lists(self):
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise StructuralError("shape mismatch")
        ar = self.entries[0].arity
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = MultiPoly.const(0, ar)
                for k in range(self.cols):
                    a = self[i, k]
                    if a:
                        b = other[k, j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix.from_rows(out)


def det_cofactor(M: PolyMatrix) -> MultiPoly:
    """Leibniz expansion; used as an oracle and for tiny sizes."""
    n = M.rows
    ar = M.entries[0].arity
    total = MultiPoly.const(0, ar)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        t = MultiPoly.const(-1 if inv % 2 else 1, ar)
        for i in range(n):
            t = t * M[i, perm[i]]
            if t.is_zero():
                break
        total = total + t
    return total


def polymatrix_det(M: PolyMatrix) -> MultiPoly:
    """Exact determinant: Leibniz for n ≤ 4, fraction-free Bareiss above."""
    if M.rows != M.cols:
        raise StructuralError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        raise StructuralError("empty matrix")
    if n <= 4:
        return det_cofactor(M)
    ar = M.entries[0].arity
    A = M.row_lists()
    sign = 1
    prev = MultiPoly.const(1, ar)
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.const(0, ar)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign
