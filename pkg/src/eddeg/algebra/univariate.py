"""Univariate exact tools: gcd, square-free decomposition, Sturm counting,
and root isolation with multiplicities.

Internally polynomials are coefficient lists, constant term first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import List, Sequence

import mpmath
import numpy as np

from ..errors import DomainError, StructuralError
from .poly import MultiPoly, _norm


# ------------------------------------------------------------ list helpers

def trim(p: List) -> List:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def deg(p: Sequence) -> int:
    return len(p) - 1  # -1 only for the empty list, callers guard


def deriv(p: Sequence) -> List:
    return [_norm(k * p[k]) for k in range(1, len(p))]


def mul(a: Sequence, b: Sequence) -> List:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([_norm(c) for c in out])


def divmod_q(a: Sequence, b: Sequence):
    """Division over Q."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a]
    r = trim(r)
    lb = Fraction(b[-1])
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for j, y in enumerate(b):
            r[k + j] -= c * y
        r.pop()
        r = trim(r)
    return trim([_norm(c) for c in q]), [_norm(c) for c in r]


def primitive(p: Sequence) -> List[int]:
    """Integer coefficients, content 1, positive leading coefficient."""
    p = trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def prem(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, integers only."""
    r = list(a)
    lb = b[-1]
    nb = len(b)
    e = len(r) - nb + 1
    while len(r) >= nb and r:
        c = r[-1]
        k = len(r) - nb
        r = [x * lb for x in r]
        for j in range(nb):
            r[k + j] -= c * b[j]
        r.pop()
        e -= 1
        r = trim(r)
    if e > 0 and r:
        f = lb ** e
        r = [x * f for x in r]
    return r


def gcd_poly(a: Sequence, b: Sequence) -> List[int]:
    """Primitive integer gcd (primitive PRS)."""
    a, b = primitive(a), primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = prem(a, b)
        a, b = b, primitive(r)
    return primitive(a)


def exact_quo(a: Sequence, b: Sequence) -> List:
    q, r = divmod_q(a, b)
    if r:
        raise StructuralError("inexact univariate division")
    return q


def yun(p: Sequence) -> List[List[int]]:
    """Square-free decomposition [f1, f2, ...] with p ~ prod fi^i.

    Uses the gcd filtration g_k = gcd(g_{k-1}, g_{k-1}'), which is insensitive
    to scalar normalisation.
    """
    g = [primitive(p)]
    if not g[0]:
        raise DomainError("zero polynomial")
    while len(g[-1]) > 1:
        g.append(gcd_poly(g[-1], deriv(g[-1])))
    h = [primitive(exact_quo(g[i - 1], g[i])) for i in range(1, len(g))]
    h.append([1])
    out = [primitive(exact_quo(h[i], h[i + 1])) for i in range(len(h) - 1)]
    while out and len(out[-1]) == 1:
        out.pop()
    return out


def squarefree_list(p: Sequence) -> List[int]:
    p = primitive(p)
    if not p:
        raise DomainError("zero polynomial")
    g = gcd_poly(p, deriv(p))
    return primitive(exact_quo(p, g))


# ------------------------------------------------------------ Sturm

def sturm_sequence(p: Sequence) -> List[List[int]]:
    p = primitive(p)
    seq = [p, primitive(deriv(p))]
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        r = prem(a, b)
        if not r:
            break
        # prem = lc(b)^k * rem; keep the sign of -rem
        k = len(a) - len(b) + 1
        sgn = -1 if (b[-1] < 0 and k % 2) else 1
        r = [-sgn * x for x in r]
        g = 0
        for x in r:
            g = gcd(g, x)
        seq.append([x // abs(g) for x in r])
    if len(seq[-1]) > 1:
        raise DomainError("polynomial is not square-free")
    return seq


def _sign_at(p: Sequence[int], x) -> int:
    if x == float("inf"):
        return (p[-1] > 0) - (p[-1] < 0)
    if x == float("-inf"):
        s = (p[-1] > 0) - (p[-1] < 0)
        return s if (len(p) - 1) % 2 == 0 else -s
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    n = len(p) - 1
    v = 0
    for i, c in enumerate(p):
        v += c * num ** i * den ** (n - i)
    return (v > 0) - (v < 0)


def _variations(seq, x) -> int:
    signs = [s for s in (_sign_at(q, x) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count_list(p: Sequence, a=float("-inf"), b=float("inf"), seq=None) -> int:
    if seq is None:
        seq = sturm_sequence(p)
    if not (a < b):
        raise DomainError("need a < b")
    if len(seq[0]) <= 1:
        return 0
    return _variations(seq, a) - _variations(seq, b)


def _as_list(p: MultiPoly) -> List:
    if not isinstance(p, MultiPoly):
        return trim(list(p))
    vs = p.variables()
    if len(vs) > 1:
        raise StructuralError("expected a univariate polynomial")
    return p.univariate_coeffs(vs[0] if vs else 0)


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """p / gcd(p, p'), integer content 1, positive leading coefficient."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    vs = p.variables()
    v = vs[0] if vs else 0
    return MultiPoly.univariate(squarefree_list(_as_list(p)), p.arity, v)


def sturm_count(p: MultiPoly, a=float("-inf"), b=float("inf")) -> int:
    """Number of distinct real roots in (a, b] of a square-free polynomial."""
    c = _as_list(p)
    if not c:
        raise DomainError("zero polynomial")
    return sturm_count_list(c, a, b)


# ------------------------------------------------------------ isolation

@dataclass(frozen=True)
class RootBox:
    center: complex
    radius: float
    multiplicity: int
    is_real: bool


def _mp_roots(p: List[int], dps: int):
    """Roots of a square-free integer polynomial to roughly dps digits."""
    n = len(p) - 1
    if n == 0:
        return []
    if n == 1:
        with mpmath.workdps(dps + 10):
            return [mpmath.mpc(mpmath.mpf(-p[0]) / p[1])]
    with mpmath.workdps(dps + 10):
        coeffs = [mpmath.mpf(c) for c in p]
        big = max(abs(c) for c in coeffs)
        scaled = [float(c / big) for c in coeffs]
        try:
            guess = np.roots(scaled[::-1])
        except np.linalg.LinAlgError:
            guess = []
        roots = []
        hi = coeffs[::-1]
        dhi = [c * (n - i) for i, c in enumerate(hi[:-1])]
        ok = len(guess) == n and np.all(np.isfinite(guess))
        if ok:
            tol = mpmath.mpf(10) ** (-dps)
            for g in guess:
                z = mpmath.mpc(complex(g))
                for _ in range(200):
                    fz = mpmath.polyval(hi, z)
                    dz = mpmath.polyval(dhi, z)
                    if dz == 0:
                        break
                    step = fz / dz
                    z -= step
                    if abs(step) <= tol * max(1, abs(z)):
                        break
                roots.append(z)
        if not ok or not _distinct(roots):
            roots = list(mpmath.polyroots(hi, maxsteps=400, extraprec=4 * dps))
            roots = [mpmath.mpc(r) for r in roots]
        return roots


def _distinct(roots) -> bool:
    for i in range(len(roots)):
        for j in range(i):
            if abs(roots[i] - roots[j]) <= 1e-30 * max(1, abs(roots[i])):
                return False
    return True


def _boxes_for(p: List[int], dps: int):
    n = len(p) - 1
    roots = _mp_roots(p, dps)
    out = []
    with mpmath.workdps(dps + 10):
        hi = [mpmath.mpf(c) for c in p[::-1]]
        dhi = [c * (n - i) for i, c in enumerate(hi[:-1])]
        for z in roots:
            fz = abs(mpmath.polyval(hi, z))
            dz = abs(mpmath.polyval(dhi, z))
            # a disc of radius n|p/p'| around z contains a root
            r = n * fz / dz if dz else mpmath.mpf(1)
            r = r * 2 + mpmath.mpf(10) ** (-dps + 5) * max(1, abs(z))
            out.append((z, r))
    return out


def _certify(boxes) -> bool:
    for i in range(len(boxes)):
        for j in range(i):
            if abs(boxes[i][0] - boxes[j][0]) <= boxes[i][1] + boxes[j][1]:
                return False
    return True


def isolate_list(p: Sequence, dps: int = 40, with_mp: bool = False):
    """Root boxes of p with multiplicities from the square-free decomposition."""
    p = primitive(p)
    if not p:
        raise DomainError("zero polynomial")
    factors = yun(p)
    allboxes = []
    for mult, f in enumerate(factors, start=1):
        if len(f) <= 1:
            continue
        prec = dps
        while True:
            boxes = _boxes_for(f, prec)
            if _certify(boxes):
                break
            prec *= 2
            if prec > 1000:
                raise DomainError("root isolation failed to separate roots")
        allboxes.extend((z, r, mult) for z, r in boxes)
    # boxes from different square-free factors are distinct roots too
    prec = dps
    if not _certify([(z, r) for z, r, _ in allboxes]):
        raise DomainError("root boxes of different multiplicity overlap")
    result = []
    for i, (z, r, m) in enumerate(allboxes):
        real = abs(z.imag) <= r
        if real:
            # a conjugate partner is a different box overlapping conj(z)
            cz = mpmath.conj(z)
            for j, (w, s, _) in enumerate(allboxes):
                if j != i and abs(w - cz) <= r + s:
                    real = False
                    break
        box = RootBox(complex(z), float(r), m, bool(real))
        result.append((box, z) if with_mp else box)
    return result


def isolate_roots(p: MultiPoly) -> List[RootBox]:
    return isolate_list(_as_list(p))
