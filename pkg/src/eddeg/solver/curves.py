"""Critical points of the squared distance on plane curves, affine and
projective, with removal of singular and isotropic solutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from ..algebra.poly import MultiPoly, parse_poly
from ..algebra.resultant import PolyMatrix, polymatrix_det
from ..algebra.univariate import primitive
from ..errors import DomainError, RetrySignal, StructuralError
from .bivariate import (Cluster, NumPoly, is_real_point, jacobian_det, mp_num,
                        solve_bivariate)

# thresholds surfaced in diagnostics
SINGULAR_TOL = 1e-10     # relative |grad f|
ISOTROPIC_TOL = 1e-15    # |q(x)| / |x|^2
SIMPLE_TOL = 1e-15       # relative Jacobian determinant below which a point is not simple

# rational rotations used when (0:1:0) is a solution of the projective system
_ROTATIONS = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)),
              (Fraction(8, 17), Fraction(15, 17))]


@dataclass(frozen=True)
class PlaneCurve:
    form: MultiPoly
    projective: bool = False
    known_singular_points: Tuple[tuple, ...] = ()

    def __post_init__(self):
        want = 3 if self.projective else 2
        if self.form.arity != want:
            raise StructuralError(f"{'projective' if self.projective else 'affine'} curve needs arity {want}")
        if self.form.is_zero() or self.form.degree < 1:
            raise DomainError("degenerate curve")
        if self.projective and not self.form.is_homogeneous():
            raise StructuralError("projective form must be homogeneous")

    @classmethod
    def parse(cls, text: str, projective: bool = False, singular=()) -> "PlaneCurve":
        form = parse_poly(text, 3 if projective else 2)
        return cls(form, projective, tuple(tuple(Fraction(c) for c in p) for p in singular))

    def closure(self) -> "PlaneCurve":
        """Homogenization with x0 appended as the third variable."""
        if self.projective:
            return self
        sing = tuple(tuple(p) + (Fraction(1),) for p in self.known_singular_points)
        return PlaneCurve(self.form.homogenize(), True, sing)


@dataclass
class CriticalPoint:
    x: Tuple[complex, ...]
    residual: float
    distance: Optional[float]
    real: bool

    def to_json(self) -> dict:
        return {
            "x": [[c.real, c.imag] if c.imag else c.real for c in self.x],
            "residual": self.residual,
            "distance": self.distance,
            "real": self.real,
        }


@dataclass
class CriticalReport:
    complex_count: int
    real_count: int
    excluded_singular: int = 0
    excluded_isotropic: int = 0
    points: List[CriticalPoint] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "complex_count": self.complex_count,
            "real_count": self.real_count,
            "excluded_singular": self.excluded_singular,
            "excluded_isotropic": self.excluded_isotropic,
            "points": [p.to_json() for p in self.points],
        }


def _as_fracs(u) -> Tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in u)


def build_affine_system(curve: PlaneCurve, u) -> Tuple[MultiPoly, MultiPoly]:
    """f and g = (u1 - x1) df/dx2 - (u2 - x2) df/dx1."""
    if curve.projective:
        raise StructuralError("affine system needs an affine curve")
    u = _as_fracs(u)
    if len(u) != 2:
        raise StructuralError("data point must have two coordinates")
    f = curve.form
    x1, x2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    g = (x1 * -1 + u[0]) * f.diff(1) - (x2 * -1 + u[1]) * f.diff(0)
    return f, g


def build_projective_system(curve: PlaneCurve, u) -> Tuple[MultiPoly, MultiPoly]:
    """F and G = det[u; x; grad F]."""
    if not curve.projective:
        raise StructuralError("projective system needs a projective curve")
    u = _as_fracs(u)
    if len(u) != 3:
        raise StructuralError("data point must have three coordinates")
    F = curve.form
    xs = [MultiPoly.var(i, 3) for i in range(3)]
    M = PolyMatrix.from_rows([[MultiPoly.const(c, 3) for c in u], xs, [F.diff(i) for i in range(3)]])
    return F, polymatrix_det(M)


# ------------------------------------------------------------ classification

def _rel_grad(fn: NumPoly, pt) -> float:
    g = [d(pt) for d in fn.grad()]
    gn = mpmath.sqrt(sum(abs(v) ** 2 for v in g))
    scale = sum(d.magnitude(pt) for d in fn.grad())
    return float(gn / scale) if scale else 0.0


def _near(pt, q, tol=1e-9) -> bool:
    return sum(abs(a - b) for a, b in zip(pt, q)) <= tol * (1 + sum(abs(b) for b in q))


def _proj_near(pt, q, tol=1e-9) -> bool:
    # compare projective points via 2x2 minors
    s = max(abs(c) for c in pt) * max(abs(mp_num(c)) for c in q)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(pt[i] * mp_num(q[j]) - pt[j] * mp_num(q[i])) > tol * s:
                return False
    return True


@dataclass
class _Tally:
    raw: int = 0
    singular: int = 0
    isotropic: int = 0
    survivors: list = field(default_factory=list)   # (point, real)
    spurious: int = 0


def _assign(cl: Cluster, kinds: List[str], simple: List[bool], tally: _Tally, real_flags: List[bool]):
    """Split a cluster's multiplicity between its points.

    Surviving points must be simple (one each); the remainder is charged
    to the excluded points of the cluster.
    """
    if not cl.points:
        tally.spurious += cl.multiplicity
        return
    tally.raw += cl.multiplicity
    keep = [i for i, k in enumerate(kinds) if k == "ok"]
    excl = [i for i, k in enumerate(kinds) if k != "ok"]
    for i in keep:
        if not simple[i] or (len(cl.points) == 1 and cl.multiplicity > 1):
            raise RetrySignal("critical point is not simple")
        tally.survivors.append((cl.points[i], real_flags[i]))
    rest = cl.multiplicity - len(keep)
    if rest < 0:
        raise RetrySignal("more points than the resultant multiplicity")
    if rest == 0:
        return
    cats = {kinds[i] for i in excl}
    if not cats:
        raise RetrySignal("unexplained resultant multiplicity")
    if len(cats) > 1:
        raise RetrySignal("excluded points of different kinds share one projection")
    if cats == {"singular"}:
        tally.singular += rest
    else:
        tally.isotropic += rest


def _classify_affine(f: MultiPoly, g: MultiPoly, clusters, singular_pts, tally: _Tally):
    F, G = NumPoly(f), NumPoly(g)
    for cl in clusters:
        kinds, simple, reals = [], [], []
        for pt in cl.points:
            if any(_near(pt, [mp_num(c) for c in q]) for q in singular_pts) or _rel_grad(F, pt) < SINGULAR_TOL:
                kinds.append("singular")
            else:
                kinds.append("ok")
            det, scale = jacobian_det(F, G, pt)
            simple.append(bool(scale) and abs(det) > SIMPLE_TOL * scale)
            reals.append(cl.x1_is_real and is_real_point(pt))
        _assign(cl, kinds, simple, tally, reals)


def _finish(tally: _Tally, dist_fn, resid_fn, diag) -> CriticalReport:
    pts = []
    for pt, real in tally.survivors:
        d = float(dist_fn(pt)) if real else None
        pts.append(CriticalPoint(tuple(complex(c) for c in pt), float(resid_fn(pt)), d, real))
    real_pts = sorted((p for p in pts if p.real), key=lambda p: (p.distance, [c.real for c in p.x]))
    other = [p for p in pts if not p.real]
    complex_count = tally.raw - tally.singular - tally.isotropic
    if complex_count != len(pts):
        raise RetrySignal("multiplicity bookkeeping does not match the surviving points")
    diag = dict(diag)
    diag.update({"raw_count": tally.raw, "spurious_resultant_roots": tally.spurious,
                 "singular_tol": SINGULAR_TOL, "isotropic_tol": ISOTROPIC_TOL})
    return CriticalReport(complex_count, len(real_pts), tally.singular, tally.isotropic,
                          real_pts + other, diag)


def count_critical(curve: PlaneCurve, u) -> CriticalReport:
    """Count complex and real critical points of the distance from u."""
    if curve.projective:
        return _count_projective(curve, _as_fracs(u))
    u = _as_fracs(u)
    f, g = build_affine_system(curve, u)
    if g.is_zero():
        raise RetrySignal("critical equation vanishes identically")
    R, clusters = solve_bivariate(f, g)
    tally = _Tally()
    _classify_affine(f, g, clusters, curve.known_singular_points, tally)
    F, G = NumPoly(f), NumPoly(g)
    um = [mp_num(c) for c in u]

    def dist(pt):
        return sum((mpmath.re(a) - b) ** 2 for a, b in zip(pt, um))

    def resid(pt):
        return abs(F(pt)) + abs(G(pt))

    return _finish(tally, dist, resid, {"resultant_degree": len(R.univariate_coeffs(0)) - 1})


# ------------------------------------------------------------ projective

def _rotate(F: MultiPoly, u, rot):
    c, s = rot
    x = [MultiPoly.var(i, 3) for i in range(3)]
    # F'(x) = F(Rx) with R orthogonal; data rotates by R^T
    img = [x[0] * c - x[1] * s, x[0] * s + x[1] * c, x[2]]
    F2 = F.compose(img)
    u2 = (c * u[0] + s * u[1], -s * u[0] + c * u[1], u[2])
    return F2, u2


def _rotate_point(q, rot):
    c, s = rot
    return (c * q[0] + s * q[1], -s * q[0] + c * q[1], q[2])


def _is_power_of_q(F: MultiPoly) -> bool:
    d = F.degree
    if d % 2:
        return False
    q = parse_poly("x1^2+x2^2+x3^2", 3) ** (d // 2)
    c = F.terms.get((0, 0, d), 0)
    return bool(c) and F == q * c


def _count_projective(curve: PlaneCurve, u) -> CriticalReport:
    F = curve.form
    sing = list(curve.known_singular_points)
    rot_used = None
    F0, G0 = build_projective_system(curve, u)
    if G0.is_zero():
        if _is_power_of_q(F):
            # every point of the curve lies on Q, nothing survives saturation
            return CriticalReport(0, 0, 0, 0, [], {"degenerate": "curve contained in the isotropic quadric"})
        raise RetrySignal("critical equation vanishes identically")
    pt010 = (0, 1, 0)
    if F0.evaluate(pt010) == 0 and G0.evaluate(pt010) == 0:
        for rot in _ROTATIONS:
            F2, u2 = _rotate(F, u, rot)
            c2 = PlaneCurve(F2, True, tuple(_rotate_point(q, rot) for q in sing))
            Ft, Gt = build_projective_system(c2, u2)
            if not (Ft.evaluate(pt010) == 0 and Gt.evaluate(pt010) == 0):
                F, u, sing, rot_used = F2, u2, list(c2.known_singular_points), rot
                break
        else:
            raise RetrySignal("(0:1:0) remains a solution after rotation")
    curve2 = PlaneCurve(F, True, tuple(sing))
    Fh, Gh = build_projective_system(curve2, u)
    FN, GN = NumPoly(Fh), NumPoly(Gh)
    Q = NumPoly(parse_poly("x1^2+x2^2+x3^2", 3))
    tally = _Tally()

    def classify(cl: Cluster, to_hom, f2, g2):
        fN, gN = NumPoly(f2), NumPoly(g2)
        kinds, simple, reals = [], [], []
        for pt in cl.points:
            hp = to_hom(pt)
            nrm = sum(abs(c) ** 2 for c in hp)
            if any(_proj_near(hp, q) for q in sing) or _rel_grad(FN, hp) < SINGULAR_TOL:
                kinds.append("singular")
            elif abs(Q(hp)) <= ISOTROPIC_TOL * nrm:
                kinds.append("isotropic")
            else:
                kinds.append("ok")
            det, scale = jacobian_det(fN, gN, pt)
            simple.append(bool(scale) and abs(det) > SIMPLE_TOL * scale)
            reals.append(cl.x1_is_real and is_real_point(pt))
        cl.points = [to_hom(p) for p in cl.points]
        _assign(cl, kinds, simple, tally, reals)

    # chart x3 = 1: variables (x1, x2)
    one = MultiPoly.const(1, 2)
    a, b = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    f3, g3 = Fh.compose([a, b, one]), Gh.compose([a, b, one])
    R3, clusters = solve_bivariate(f3, g3)
    for cl in clusters:
        classify(cl, lambda p: (p[0], p[1], mpmath.mpc(1)), f3, g3)
    # chart x1 = 1 restricted to x3 = 0: variables ordered (x3, x2)
    f1, g1 = Fh.compose([one, b, a]), Gh.compose([one, b, a])
    inf_clusters = []
    if not f1.is_zero() and not g1.is_zero() and f1.degree_in(1) >= 1 and g1.degree_in(1) >= 1:
        _, inf_clusters = solve_bivariate(f1, g1, only_zero=True)
        for cl in inf_clusters:
            classify(cl, lambda p: (mpmath.mpc(1), p[1], p[0]), f1, g1)
    um = [mp_num(c) for c in u]

    def dist(hp):
        x = [mpmath.re(c) for c in hp]
        xx = sum(c * c for c in x)
        ux = sum(p * q for p, q in zip(um, x))
        return sum(c * c for c in um) - ux * ux / xx

    def resid(hp):
        n = max(abs(c) for c in hp)
        z = [c / n for c in hp]
        return abs(FN(z)) + abs(GN(z))

    rep = _finish(tally, dist, resid, {"resultant_degree": len(R3.univariate_coeffs(0)) - 1,
                                      "points_at_infinity_multiplicity": sum(c.multiplicity for c in inf_clusters if c.points),
                                      "rotation": None if rot_used is None else [str(rot_used[0]), str(rot_used[1])]})
    return rep


def homogenization_lemma_residual(curve: PlaneCurve, u, report: CriticalReport) -> float:
    """Check the map x -> (x, 1)/(1 + x.x) on critical points of d_0.

    Critical points of d_u on X are critical points of d_0 on X - u. Their
    images must be critical for the distance from e = (0, 0, 1) on the cone
    over the closure of X - u, i.e. e - y must be parallel to grad F(y).
    Returns the largest relative residual over the real and complex points.
    """
    u = _as_fracs(u)
    x1, x2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    shifted = curve.form.compose([x1 + u[0], x2 + u[1]])
    Fn = NumPoly(shifted.homogenize())
    worst = 0.0
    for p in report.points:
        x = [mpmath.mpc(c) - mp_num(b) for c, b in zip(p.x, u)]
        den = 1 + x[0] ** 2 + x[1] ** 2
        y = (x[0] / den, x[1] / den, 1 / den)
        gr = [d(y) for d in Fn.grad()]
        w = (-y[0], -y[1], 1 - y[2])
        cross = (w[1] * gr[2] - w[2] * gr[1], w[2] * gr[0] - w[0] * gr[2], w[0] * gr[1] - w[1] * gr[0])
        cn = mpmath.sqrt(sum(abs(c) ** 2 for c in cross))
        sc = mpmath.sqrt(sum(abs(c) ** 2 for c in w)) * mpmath.sqrt(sum(abs(c) ** 2 for c in gr))
        worst = max(worst, float(cn / sc) if sc else 0.0,
                    float(abs(Fn(y)) / max(Fn.magnitude(y), mpmath.mpf(1e-300))))
    return worst


def affine_vs_closure(curve: PlaneCurve, u, check_lemma: bool = True):
    """(ED degree of the affine curve, ED degree of its projective closure).

    The closure is evaluated at data (u1, u2, 1); with the closure's
    variables ordered (x1, x2, x0) this is the cone over the affine data.
    """
    u = _as_fracs(u)
    aff = count_critical(curve, u)
    cl = count_critical(curve.closure(), (u[0], u[1], Fraction(1)))
    info = {"affine": aff, "closure": cl}
    if check_lemma:
        info["lemma_residual"] = homogenization_lemma_residual(curve, u, aff)
    return aff.complex_count, cl.complex_count, info
