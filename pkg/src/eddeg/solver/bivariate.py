"""Exact-then-numeric solver for square systems f = g = 0 in two variables.

The variable x2 is eliminated by a resultant; the roots of the resultant
are isolated with multiplicities, and for every root the matching x2 values
are recovered from f(x1, .) and filtered by |g|. Points are Newton-polished
in high precision. Multiplicities stay attached to x1-clusters; callers
decide how to split them between excluded and surviving points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from ..algebra.poly import MultiPoly
from ..algebra.resultant import resultant
from ..algebra.univariate import isolate_list, primitive
from ..errors import RetrySignal

DPS = 60
MATCH_TOL = 1e-18      # relative |g| for accepting an x2 candidate
DEDUP_TOL = 1e-12      # points closer than this (relative) are one point


def mp_num(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


class NumPoly:
    """A MultiPoly compiled for repeated mpmath evaluation."""

    def __init__(self, p: MultiPoly):
        self.poly = p
        self.arity = p.arity
        self.terms = [(e, c) for e, c in p.terms.items()]
        self.grad_polys = None

    def __call__(self, pt):
        total = mpmath.mpc(0)
        for e, c in self.terms:
            t = mp_num(c)
            for x, k in zip(pt, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def magnitude(self, pt):
        """Sum of |term| values; the natural scale for a relative residual."""
        total = mpmath.mpf(0)
        for e, c in self.terms:
            t = abs(mp_num(c))
            for x, k in zip(pt, e):
                if k:
                    t *= abs(x) ** k
            total += t
        return total

    def grad(self):
        if self.grad_polys is None:
            self.grad_polys = [NumPoly(self.poly.diff(i)) for i in range(self.arity)]
        return self.grad_polys


@dataclass
class Cluster:
    """All common solutions sharing one x1 value (a root of the resultant)."""
    x1: object                     # mpc
    multiplicity: int
    x1_is_real: bool
    points: List[tuple] = field(default_factory=list)   # (x1, x2) mpc pairs


def _univariate_roots(coeffs: Sequence, dps: int):
    """Complex roots of a polynomial with mpc coefficients (constant first)."""
    c = list(coeffs)
    scale = max((abs(a) for a in c), default=0)
    while c and abs(c[-1]) <= scale * mpmath.mpf(10) ** (-dps // 2):
        c.pop()
    if len(c) <= 1:
        return []
    if len(c) == 2:
        return [-c[0] / c[1]]
    try:
        return list(mpmath.polyroots(c[::-1], maxsteps=500, extraprec=3 * dps))
    except mpmath.libmp.libhyper.NoConvergence:
        return list(mpmath.polyroots(c[::-1], maxsteps=4000, extraprec=6 * dps, error=False))


def _fiber_coeffs(p: MultiPoly, x1):
    """Coefficients in x2 of p(x1, x2) at numeric x1."""
    n = p.degree_in(1)
    out = [mpmath.mpc(0)] * (n + 1)
    for (a, b), c in p.terms.items():
        out[b] += mp_num(c) * x1 ** a
    return out


def newton2(F: NumPoly, G: NumPoly, pt, steps: int = 60):
    """Newton on (F, G) in two variables; stops quietly at singular Jacobians."""
    x, y = pt
    Fx, Fy = F.grad()
    Gx, Gy = G.grad()
    tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 8))
    for _ in range(steps):
        f, g = F((x, y)), G((x, y))
        a, b, c, d = Fx((x, y)), Fy((x, y)), Gx((x, y)), Gy((x, y))
        det = a * d - b * c
        scale = (abs(a) + abs(b)) * (abs(c) + abs(d))
        if scale == 0 or abs(det) <= scale * mpmath.mpf(10) ** (-(mpmath.mp.dps // 3)):
            break
        dx = (d * f - b * g) / det
        dy = (a * g - c * f) / det
        x -= dx
        y -= dy
        if abs(dx) + abs(dy) <= tol * (1 + abs(x) + abs(y)):
            break
    return x, y


def jacobian_det(F: NumPoly, G: NumPoly, pt):
    Fx, Fy = F.grad()
    Gx, Gy = G.grad()
    a, b, c, d = Fx(pt), Fy(pt), Gx(pt), Gy(pt)
    scale = (abs(a) + abs(b)) * (abs(c) + abs(d))
    return a * d - b * c, scale


def solve_bivariate(f: MultiPoly, g: MultiPoly, only_zero: bool = False, dps: int = DPS):
    """Clusters of common zeros of f and g (arity 2), grouped by x1.

    ``only_zero`` restricts to the cluster x1 = 0 (used for points at
    infinity in a second chart). Raises RetrySignal when the resultant
    vanishes identically.
    """
    df, dg = f.degree_in(1), g.degree_in(1)
    if f.is_zero() or g.is_zero() or (df < 1 and dg < 1):
        raise RetrySignal("system does not cut out finitely many points")
    if df < 1:
        R = f ** dg      # Res of a polynomial free of x2
    elif dg < 1:
        R = g ** df
    else:
        R = resultant(f, g, 1)
    if R.is_zero():
        raise RetrySignal("resultant vanishes identically")
    coeffs = R.univariate_coeffs(0)
    F, G = NumPoly(f), NumPoly(g)
    clusters: List[Cluster] = []
    with mpmath.workdps(dps):
        if only_zero:
            v = next(i for i, c in enumerate(coeffs) if c)
            roots = [(mpmath.mpc(0), v, True)] if v else []
        else:
            roots = [(z, box.multiplicity, box.is_real) for box, z in isolate_list(coeffs, dps=dps, with_mp=True)]
        for x1, mult, is_real in roots:
            cl = Cluster(x1, mult, is_real)
            cand = _univariate_roots(_fiber_coeffs(f, x1), dps)
            if not cand:
                # f vanishes on the whole vertical line or has no finite roots there
                cand = _univariate_roots(_fiber_coeffs(g, x1), dps)
            for y in cand:
                pt = (x1, y)
                if abs(G(pt)) > MATCH_TOL * max(G.magnitude(pt), 1e-300) or \
                        abs(F(pt)) > MATCH_TOL * max(F.magnitude(pt), 1e-300):
                    continue
                pt = newton2(F, G, pt)
                if any(abs(pt[0] - q[0]) + abs(pt[1] - q[1]) <= DEDUP_TOL * (1 + abs(q[0]) + abs(q[1]))
                       for q in cl.points):
                    continue
                cl.points.append(pt)
            clusters.append(cl)
    return R, clusters


def is_real_point(pt, tol: float = 1e-20) -> bool:
    return all(abs(mpmath.im(c)) <= tol * (1 + abs(c)) for c in pt)
