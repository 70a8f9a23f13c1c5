"""Critical points of the distance on a surface given by a polynomial map of
two parameters: solve dD/dt1 = dD/dt2 = 0 for D(t) = sum w_i (psi_i(t) - u_i)^2."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath

from ..algebra.poly import MultiPoly
from ..errors import DomainError, RetrySignal, StructuralError
from .bivariate import NumPoly, is_real_point, jacobian_det, mp_num, solve_bivariate
from .curves import SIMPLE_TOL, CriticalReport, _assign, _finish, _Tally

RANK_TOL = 1e-10


def distance_function(psi: Sequence[MultiPoly], u, weights=None) -> MultiPoly:
    if not psi:
        raise StructuralError("empty parametrization")
    if any(p.arity != 2 for p in psi):
        raise StructuralError("parametrization must use two parameters")
    u = [Fraction(c) for c in u]
    if len(u) != len(psi):
        raise StructuralError("data point has the wrong dimension")
    w = [Fraction(c) for c in weights] if weights is not None else [Fraction(1)] * len(psi)
    if len(w) != len(psi) or any(c <= 0 for c in w):
        raise DomainError("weights must be positive, one per coordinate")
    D = MultiPoly.const(0, 2)
    for p, a, c in zip(psi, u, w):
        r = p - a
        D = D + r * r * c
    return D


def param_critical_count(psi: Sequence[MultiPoly], u, k: int = 1, weights=None) -> CriticalReport:
    """Critical parameter values, with rank-deficient ones removed, divided by k.

    ``weights`` realises a scaled parametrization sqrt(w_i) psi_i with data
    sqrt(w_i) u_i while keeping every coefficient rational. Real counts are
    counts of real parameter solutions divided by nothing; for maps that are
    injective on real parameters they equal real critical points on X.
    """
    if k < 1:
        raise DomainError("k must be positive")
    D = distance_function(psi, u, weights)
    P1, P2 = D.diff(0), D.diff(1)
    if P1.is_zero() or P2.is_zero():
        raise RetrySignal("a partial derivative vanishes identically")
    R, clusters = solve_bivariate(P1, P2)
    N1, N2 = NumPoly(P1), NumPoly(P2)
    J = [[NumPoly(p.diff(0)), NumPoly(p.diff(1))] for p in psi]
    tally = _Tally()
    for cl in clusters:
        kinds, simple, reals = [], [], []
        for pt in cl.points:
            cols = [[row[0](pt), row[1](pt)] for row in J]
            a = sum(c[0] * c[0] for c in cols)
            b = sum(c[0] * c[1] for c in cols)
            d = sum(c[1] * c[1] for c in cols)
            gram = a * d - b * b
            scale = sum(abs(c[0]) ** 2 + abs(c[1]) ** 2 for c in cols) ** 2
            if scale == 0 or abs(gram) <= RANK_TOL ** 2 * scale:
                kinds.append("singular")
            else:
                kinds.append("ok")
            det, sc = jacobian_det(N1, N2, pt)
            simple.append(bool(sc) and abs(det) > SIMPLE_TOL * sc)
            reals.append(cl.x1_is_real and is_real_point(pt))
        _assign(cl, kinds, simple, tally, reals)
    survivors = tally.raw - tally.singular
    if survivors % k:
        raise DomainError(f"{survivors} critical parameters are not divisible by k={k}")
    Dn = NumPoly(D)
    rep = _finish(tally, lambda pt: mpmath.re(Dn(pt)), lambda pt: abs(N1(pt)) + abs(N2(pt)),
                  {"raw_count": tally.raw, "resultant_degree": len(R.univariate_coeffs(0)) - 1,
                   "parameter_solutions": survivors, "k": k, "rank_tol": RANK_TOL})
    rep.complex_count = survivors // k
    rep.diagnostics["excluded_rank_deficient"] = tally.singular
    return rep
