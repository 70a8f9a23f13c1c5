"""Constructive ED-degree count for the Hurwitz determinant hypersurfaces.

A polynomial x(z) on the stability boundary factors as
(c z^2 + d)(b_0 z^(n-2) + ... + b_(n-2)), i.e. x = C(c, d) b with C banded
(c on the diagonal, d two rows below). For data u the critical points are
cut out by C^T(u - Cb) = 0 together with orthogonality to the two extra
tangent directions b' = (b, 0, 0) and b'' = (0, 0, b).
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from ..algebra.poly import MultiPoly
from ..algebra.resultant import PolyMatrix, polymatrix_det
from ..algebra.univariate import gcd_poly, primitive, exact_quo, squarefree_list, deriv
from ..errors import DomainError, RetrySignal, StructuralError


def banded_C(n: int, homogeneous: bool = True) -> PolyMatrix:
    """(n+1) x (n-1) matrix over Q[c, d]; with c = 1 when not homogeneous."""
    c = MultiPoly.var(0, 2) if homogeneous else MultiPoly.const(1, 2)
    d = MultiPoly.var(1, 2)
    z = MultiPoly.const(0, 2)
    rows = [[z] * (n - 1) for _ in range(n + 1)]
    for j in range(n - 1):
        rows[j][j] = c
        rows[j + 2][j] = d
    return PolyMatrix.from_rows(rows)


def _adjugate(B: List[List[MultiPoly]]) -> List[List[MultiPoly]]:
    k = len(B)
    ar = B[0][0].arity
    if k == 1:
        return [[MultiPoly.const(1, ar)]]
    adj = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[B[r][s] for s in range(k) if s != j] for r in range(k) if r != i]
            cof = polymatrix_det(PolyMatrix.from_rows(minor))
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def _binary_gcd_is_trivial(a: MultiPoly, b: MultiPoly) -> bool:
    """Do two binary forms in (c, d) share a root in P^1?  (False = they do.)"""
    if a.is_zero() or b.is_zero():
        return False
    # root d = 0 (the point (1:0)) is shared iff d divides both
    da = min(e[1] for e in a.terms)
    db = min(e[1] for e in b.terms)
    if da and db:
        return False
    ua = [0] * (a.degree + 1)
    ub = [0] * (b.degree + 1)
    for (i, j), v in a.terms.items():
        ua[i] = v
    for (i, j), v in b.terms.items():
        ub[i] = v
    return len(gcd_poly(ua, ub)) <= 1


def _blocks(M: PolyMatrix):
    n1 = M.rows
    even = list(range(0, n1, 2))
    odd = list(range(1, n1, 2))
    out = []
    for idx in (even, odd):
        if idx:
            out.append((idx, [[M[i, j] for j in idx] for i in idx]))
    return out


def hurwitz_polynomials(n: int, u: Sequence, homogeneous: bool = True):
    """Return (gamma, p, q) as polynomials in (c, d) for data u."""
    if not 3 <= n <= 9:
        raise DomainError("supported range is 3 <= n <= 9")
    u = [Fraction(x) for x in u]
    C = banded_C(n, homogeneous)
    if homogeneous:
        rows = list(range(n + 1))
        if len(u) != n + 1:
            raise StructuralError(f"homogeneous data needs {n + 1} coordinates")
        fixed = None
        cols = list(range(n - 1))
    else:
        # x0 = b0 = c = 1: coordinates x1..xn, free parameters b1..b_{n-2}, d
        rows = list(range(1, n + 1))
        if len(u) != n:
            raise StructuralError(f"non-homogeneous data needs {n} coordinates")
        fixed = [C[r, 0] for r in rows]   # contribution of b0 = 1
        cols = list(range(1, n - 1))
    Ct = PolyMatrix.from_rows([[C[r, j] for j in cols] for r in rows])
    M = Ct.transpose() @ Ct
    blocks = _blocks(M)
    dets = [polymatrix_det(PolyMatrix.from_rows(B)) for _, B in blocks]
    gamma = dets[0]
    for dt in dets[1:]:
        if dt != gamma:
            if not _binary_gcd_is_trivial(gamma, dt) and homogeneous:
                raise StructuralError("block determinants share a factor")
            gamma = gamma * dt
    # gamma * M^{-1} blockwise
    k = len(cols)
    ar = 2
    zero = MultiPoly.const(0, ar)
    GMinv = [[zero] * k for _ in range(k)]
    for (idx, B), dt in zip(blocks, dets):
        adj = _adjugate(B)
        f = gamma.exact_div(dt)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                GMinv[i][j] = adj[a][b] * f
    target = [MultiPoly.const(x, ar) for x in u]
    if fixed is not None:
        target = [t - fx for t, fx in zip(target, fixed)]
    Ctu = [sum((Ct[r, j] * target[r] for r in range(len(rows))), zero) for j in range(k)]
    gb = [sum((GMinv[i][j] * Ctu[j] for j in range(k)), zero) for i in range(k)]
    # residual gamma*(u - x)
    resid = []
    for r in range(len(rows)):
        acc = target[r] * gamma
        for j in range(k):
            acc = acc - Ct[r, j] * gb[j]
        resid.append(acc)
    if homogeneous:
        # b' = (b, 0, 0), b'' = (0, 0, b) in coordinates 0..n
        p = sum((gb[i] * resid[i] for i in range(k)), zero)
        q = sum((gb[i] * resid[i + 2] for i in range(k)), zero)
    else:
        # only the d-direction remains: b'' = (0, 0, 1, b1, ..., b_{n-2}) on rows 1..n
        full_b = [gamma] + gb          # gamma * (b0, b1, ...) with b0 = 1
        p = None
        q = sum((full_b[i] * resid[i + 1] for i in range(len(full_b))), zero)
    return gamma, p, q


def hurwitz_count(n: int, u: Sequence, homogeneous: bool = False) -> int:
    """Number of critical points for data u, computed from the construction."""
    gamma, p, q = hurwitz_polynomials(n, u, homogeneous)
    c = MultiPoly.var(0, 2)
    d = MultiPoly.var(1, 2)
    if homogeneous:
        try:
            h = p.exact_div(d)
            h2 = q.exact_div(c)
        except StructuralError:
            raise AssertionError("divisibility of p by d or q by c failed") from None
        if h != -h2:
            raise AssertionError("p/d and -q/c disagree")
        if h.is_zero():
            raise RetrySignal("p vanishes identically")
        if not _binary_gcd_is_trivial(h, gamma):
            raise RetrySignal("gamma shares a root with p/d")
        # square-free in P^1: d^2 must not divide h, and h(c, 1) square-free
        dv = min(e[1] for e in h.terms)
        uni = [0] * (h.degree + 1)
        for (i, j), v in h.terms.items():
            uni[i] = v
        uni = primitive(uni)
        if dv > 1 or len(gcd_poly(uni, deriv(uni))) > 1:
            raise RetrySignal("p/d is not square-free")
        return (len(uni) - 1) + dv
    uq = q.univariate_coeffs(1) if q.variables() in ([1], []) else None
    if uq is None or not any(uq):
        raise RetrySignal("critical polynomial vanishes identically")
    ug = gamma.univariate_coeffs(1)
    qq = primitive(uq)
    # remove the roots shared with gamma (no critical point there)
    while True:
        g = gcd_poly(qq, ug)
        if len(g) <= 1:
            break
        qq = primitive(exact_quo(qq, g))
    sf = squarefree_list(qq)
    if len(sf) != len(qq):
        raise RetrySignal("critical polynomial is not square-free")
    return len(sf) - 1
