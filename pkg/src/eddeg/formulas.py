"""Closed-form ED degrees and ED-discriminant degrees.

Everything here is integer arithmetic; the (d-2) and (w-2) denominators of
the textbook closed forms are replaced by the corresponding geometric sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Sequence, Tuple

from .errors import DomainError


@dataclass(frozen=True)
class PolarClasses:
    """delta_0 .. delta_{n-2}; first/last non-zero entries are deg X* and deg X."""
    deltas: Tuple[int, ...]

    def __post_init__(self):
        if any(d < 0 for d in self.deltas):
            raise DomainError("polar classes are non-negative")


@dataclass(frozen=True)
class ChernDegrees:
    degs: Tuple[int, ...]

    def __post_init__(self):
        if not self.degs or self.degs[0] <= 0:
            raise DomainError("deg c_0 is the degree of X and must be positive")


def _geom(q: int, k: int) -> int:
    """1 + q + ... + q^(k-1)."""
    return sum(q ** i for i in range(k))


def _h_sum(ws: Sequence[int], top: int) -> int:
    """Sum over i_1+...+i_c <= top of prod w_j^{i_j}."""
    if top < 0:
        return 0
    # h[k] = complete homogeneous symmetric polynomial of degree k in ws
    h = [1] + [0] * top
    for w in ws:
        for k in range(1, top + 1):
            h[k] += w * h[k - 1]
    return sum(h)


def ed_generic_ci(n: int, degrees: Sequence[int], projective: bool = False) -> int:
    if not degrees:
        raise DomainError("need at least one degree")
    ds = sorted((int(d) for d in degrees), reverse=True)
    if any(d < 1 for d in ds):
        raise DomainError("degrees must be positive")
    c = len(ds)
    cap = n - 1 if projective else n
    if c > cap:
        raise DomainError(f"codimension {c} too large for n={n}")
    top = n - c - 1 if projective else n - c
    prod = 1
    for d in ds:
        prod *= d
    return prod * _h_sum([d - 1 for d in ds], top)


def ed_generic_hypersurface(n: int, d: int) -> int:
    if d < 1 or n < 2:
        raise DomainError("need d >= 1, n >= 2")
    return d * _geom(d - 1, n - 1)


def ed_generic_parametric(m: int, d: int) -> int:
    if m < 1 or d < 1:
        raise DomainError("need m, d >= 1")
    return (2 * d - 1) ** m


def ed_bezier(d1: int, d2: int, projective: bool = False) -> int:
    if d1 < 1 or d2 < 1:
        raise DomainError("need d1, d2 >= 1")
    if projective:
        return 14 * d1 * d2 - 6 * d1 - 6 * d2 + 4
    return 4 * d1 * d2 + (2 * d1 - 1) * (2 * d2 - 1)


def ed_hurwitz(n: int, homogeneous: bool = False) -> int:
    if n < 3:
        raise DomainError("Hurwitz determinants need n >= 3")
    m, odd = divmod(n, 2)
    if odd:
        return 4 * m - 2 if homogeneous else 8 * m - 3
    return 8 * m - 6 if homogeneous else 4 * m - 3


def ed_cayley_menger(p: int) -> int:
    if p < 3:
        raise DomainError("need p >= 3")
    val = (3 ** (p - 1) - 1) // 2
    if p % 3 == 0:
        k = p // 3
        val -= factorial(p) // (3 * factorial(k) ** 3)
    return val


def ed_eckart_young(s: int, t: int, r: int) -> int:
    if not (1 <= r <= s <= t):
        raise DomainError("need 1 <= r <= s <= t")
    return comb(s, r)


def ed_smooth_curve(d: int, g: int) -> int:
    if d < 1 or g < 0:
        raise DomainError("need d >= 1, g >= 0")
    return 3 * d + 2 * g - 2


def ed_from_chern(cd: ChernDegrees | Sequence[int]) -> int:
    degs = cd.degs if isinstance(cd, ChernDegrees) else tuple(cd)
    if not degs:
        raise DomainError("empty Chern degree list")
    m = len(degs) - 1
    return sum((-1) ** i * (2 ** (m + 1 - i) - 1) * c for i, c in enumerate(degs))


def _deltas(pc) -> Tuple[int, ...]:
    return pc.deltas if isinstance(pc, PolarClasses) else tuple(pc)


def ed_from_polar(pc: PolarClasses | Sequence[int]) -> int:
    return sum(_deltas(pc))


def polar_reverse(pc: PolarClasses | Sequence[int]) -> PolarClasses:
    return PolarClasses(tuple(reversed(_deltas(pc))))


def ed_after_projection(ed: int, codim: int) -> int:
    if codim < 2:
        raise DomainError("projection invariance needs codim >= 2; hypersurfaces are not covered")
    return ed


def ed_after_section(ed: int, deg_dual: int, codim_dual: int) -> int:
    if codim_dual < 1:
        raise DomainError("codim of the dual variety is at least 1")
    return ed - deg_dual if codim_dual == 1 else ed


def sectional_ed(pc: PolarClasses | Sequence[int], n: int) -> Tuple[int, ...]:
    """ED degrees of X cut by general linear spaces of codimension 0, 1, 2, ...

    The i-th entry is delta_i + delta_{i+1} + ... ; trailing zeros dropped.
    """
    d = list(_deltas(pc))
    if len(d) > n - 1:
        raise DomainError(f"at most n-1 = {n - 1} polar classes in P^{n - 1}")
    out = [sum(d[i:]) for i in range(len(d))]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def ed_veronese_generic(m: int, d: int) -> int:
    if m < 1 or d < 1:
        raise DomainError("need m, d >= 1")
    num = (2 * d - 1) ** (m + 1) - (d - 1) ** (m + 1)
    q, r = divmod(num, d)
    if r:
        raise ArithmeticError("Veronese ED degree not integral")  # cannot happen
    return q


def ed_eigen_count(m: int, w: int) -> int:
    if m < 1 or w < 2:
        raise DomainError("need m >= 1, w >= 2")
    return _geom(w - 1, m)


_DISC_KINDS = {
    "generic_hypersurface": ("n", "d"),
    "plane_curve": ("d", "delta", "k"),
    "smooth_space_curve": ("d", "g"),
    "smooth_surface": ("d", "c1sq", "c2", "degc1"),
}


def ed_discriminant_degree(kind: str, **params) -> int:
    """Degree of the ED discriminant for one of the supported families.

    generic_hypersurface(n, d): general hypersurface of degree d in P^{n-1}
    plane_curve(d, delta, k): plane curve with delta nodes and k cusps
    smooth_space_curve(d, g), smooth_surface(d, c1sq, c2, degc1)
    """
    if kind not in _DISC_KINDS:
        raise DomainError(f"unknown discriminant kind {kind!r}")
    need = _DISC_KINDS[kind]
    if set(params) != set(need):
        raise DomainError(f"{kind} takes parameters {need}")
    p = {k: int(v) for k, v in params.items()}
    if p["d"] < 1:
        raise DomainError("degree must be positive")
    if kind == "generic_hypersurface":
        n, d = p["n"], p["d"]
        if n < 3:
            raise DomainError("need n >= 3")
        return d * (n - 2) * (d - 1) ** (n - 2) + 2 * d * (d - 1) * _geom(d - 1, n - 2)
    if kind == "plane_curve":
        return 3 * p["d"] ** 2 - 3 * p["d"] - 6 * p["delta"] - 8 * p["k"]
    if kind == "smooth_space_curve":
        return 6 * (p["d"] + p["g"] - 1)
    return 2 * (15 * p["d"] + p["c1sq"] + p["c2"] - 9 * p["degc1"])


FORMULAS = {
    "generic_ci": ed_generic_ci,
    "generic_hypersurface": ed_generic_hypersurface,
    "generic_parametric": ed_generic_parametric,
    "bezier": ed_bezier,
    "hurwitz": ed_hurwitz,
    "cayley_menger": ed_cayley_menger,
    "eckart_young": ed_eckart_young,
    "smooth_curve": ed_smooth_curve,
    "from_chern": ed_from_chern,
    "from_polar": ed_from_polar,
    "after_projection": ed_after_projection,
    "after_section": ed_after_section,
    "sectional": sectional_ed,
    "veronese_generic": ed_veronese_generic,
    "eigen_count": ed_eigen_count,
    "discriminant": ed_discriminant_degree,
}
