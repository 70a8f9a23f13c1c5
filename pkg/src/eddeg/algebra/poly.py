"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are stored as ``int`` when integral and ``Fraction`` otherwise,
so equality and hashing stay canonical while integer-heavy work (resultants)
avoids Fraction overhead.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from ..errors import StructuralError

NEG_INF = float("-inf")  # degree of the zero polynomial

Exps = Tuple[int, ...]


def _norm(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    return _norm(Fraction(c))


def _cdiv(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return _norm(Fraction(a) / b)


class MultiPoly:
    """Immutable polynomial in ``arity`` variables x1..xn."""

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Dict[Exps, object] | None = None, _trusted=False):
        self.arity = arity
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(int(v) for v in e)
                if len(e) != arity or any(v < 0 for v in e):
                    raise StructuralError(f"bad exponent vector {e} for arity {arity}")
                c = _norm(c)
                if c:
                    clean[e] = _norm(clean.get(e, 0) + c)
                    if not clean[e]:
                        del clean[e]
            self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c, arity: int) -> "MultiPoly":
        c = _norm(c)
        return cls(arity, {(0,) * arity: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, i: int, arity: int) -> "MultiPoly":
        if not 0 <= i < arity:
            raise StructuralError(f"variable index {i} out of range for arity {arity}")
        e = [0] * arity
        e[i] = 1
        return cls(arity, {tuple(e): 1}, _trusted=True)

    @classmethod
    def univariate(cls, coeffs: Sequence, arity: int = 1, var: int = 0) -> "MultiPoly":
        """Coefficients listed from the constant term upward."""
        terms = {}
        for k, c in enumerate(coeffs):
            c = _norm(c)
            if c:
                e = [0] * arity
                e[var] = k
                terms[tuple(e)] = c
        return cls(arity, terms, _trusted=True)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int):
        if not self.terms:
            return NEG_INF
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def constant_value(self):
        if not self.terms:
            return 0
        if len(self.terms) == 1 and (0,) * self.arity in self.terms:
            return self.terms[(0,) * self.arity]
        raise StructuralError("polynomial is not constant")

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(other, self.arity)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # arithmetic
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise StructuralError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return MultiPoly(self.arity, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.arity, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm(other)
            if not other:
                return MultiPoly(self.arity, {}, _trusted=True)
            return MultiPoly(self.arity, {e: _norm(c * other) for e, c in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.arity, {e: _norm(c) for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise StructuralError("negative power")
        result = MultiPoly.const(1, self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "MultiPoly":
        return self * _norm(c)

    # calculus and evaluation
    def diff(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.arity:
            raise StructuralError(f"variable index {i} out of range")
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = _norm(c * e[i])
        return MultiPoly(self.arity, out, _trusted=True)

    def evaluate(self, point: Sequence):
        """Exact evaluation at a point of Rationals (floats/complex also work)."""
        if len(point) != self.arity:
            raise StructuralError("point length does not match arity")
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total = total + t
        return _norm(total) if isinstance(total, (int, Fraction)) else total

    def substitute(self, values: Dict[int, object]) -> "MultiPoly":
        """Replace some variables by rational constants; arity unchanged."""
        out: Dict[Exps, object] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            t = c
            for i, v in values.items():
                if e[i]:
                    t = t * v ** e[i]
                    e2[i] = 0
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + t
        return MultiPoly(self.arity, out)

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomial ``images[i]`` for variable i."""
        if len(images) != self.arity:
            raise StructuralError("need one image per variable")
        ar = images[0].arity
        cache = {}

        def pw(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        total = MultiPoly(ar, {}, _trusted=True)
        for e, c in self.terms.items():
            t = MultiPoly.const(c, ar)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            total = total + t
        return total

    def reorder(self, perm: Sequence[int], arity: int | None = None) -> "MultiPoly":
        """Variable i moves to position perm[i]."""
        arity = self.arity if arity is None else arity
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * arity
            for i, k in enumerate(e):
                if k:
                    e2[perm[i]] = k
            out[tuple(e2)] = c
        return MultiPoly(arity, out, _trusted=True)

    def homogenize(self) -> "MultiPoly":
        """x0^d f(x/x0) with the new variable x0 appended last."""
        d = self.degree
        out = {}
        for e, c in self.terms.items():
            out[e + (d - sum(e),)] = c
        return MultiPoly(self.arity + 1, out, _trusted=True)

    def coeffs_in(self, i: int):
        """List of coefficients (as polynomials, same arity) of powers of x_i."""
        if not self.terms:
            return []
        n = self.degree_in(i)
        buckets = [dict() for _ in range(n + 1)]
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[i]
            e2[i] = 0
            buckets[k][tuple(e2)] = c
        return [MultiPoly(self.arity, b, _trusted=True) for b in buckets]

    def univariate_coeffs(self, i: int = 0):
        """Rational coefficients, low to high, for a polynomial involving only x_i."""
        if not self.terms:
            return []
        n = self.degree_in(i)
        out = [0] * (n + 1)
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise StructuralError("polynomial is not univariate in the requested variable")
            out[e[i]] = c
        return out

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(j for j, k in enumerate(e) if k)
        return sorted(used)

    def leading_term(self):
        """Lex-largest exponent and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def integer_primitive(self) -> "MultiPoly":
        """Scale to coprime integer coefficients with positive leading (lex) coefficient."""
        from math import gcd, lcm
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if ints[max(ints)] < 0:
            g = -g
        return MultiPoly(self.arity, {e: v // g for e, v in ints.items()}, _trusted=True)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient when ``other`` divides ``self``; raises otherwise."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if len(other.terms) == 1:
            (eb, cb), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                q = tuple(a - b for a, b in zip(e, eb))
                if min(q, default=0) < 0:
                    raise StructuralError("inexact polynomial division")
                out[q] = _cdiv(c, cb)
            return MultiPoly(self.arity, out, _trusted=True)
        eb, cb = other.leading_term()
        rem = dict(self.terms)
        quot = {}
        while rem:
            e = max(rem)
            q = tuple(a - b for a, b in zip(e, eb))
            if min(q) < 0:
                raise StructuralError("inexact polynomial division")
            qc = _cdiv(rem[e], cb)
            quot[q] = qc
            for e2, c2 in other.terms.items():
                t = tuple(a + b for a, b in zip(q, e2))
                v = rem.get(t, 0) - qc * c2
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return MultiPoly(self.arity, quot, _trusted=True)

    # text
    def __repr__(self):
        return f"MultiPoly({self.arity}, {to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if a.arity != b.arity:
        raise StructuralError(f"arity mismatch: {a.arity} vs {b.arity}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise StructuralError(f"unknown op {op!r}")


def partial_derivative(a: MultiPoly, var_index: int) -> MultiPoly:
    return a.diff(var_index)


def evaluate(a: MultiPoly, point: Sequence):
    return a.evaluate([_norm(p) if isinstance(p, (int, Fraction)) else p for p in point])


# ---------------------------------------------------------------- text grammar

_ALIASES = {"x": 1, "y": 2, "z": 3}
_TERM_RE = re.compile(r"([+-])?([^+-]+)")
_FACTOR_RE = re.compile(r"\*?(?:([xt](\d+)|x|y|z)(?:\^(\d+))?)")
_COEF_RE = re.compile(r"(\d+)(?:/(\d+))?")


def parse_poly(text: str, arity: int | None = None) -> MultiPoly:
    """Parse e.g. ``"x1^5+x2^5+x3^5"`` or ``"3xy+1/2x-4y"``.

    ``t1, t2`` are accepted as synonyms of ``x1, x2`` for parametrizations.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise StructuralError("empty polynomial")
    raw_terms = []
    pos = 0
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        end = pos
        while end < len(s) and s[end] not in "+-":
            end += 1
        body = s[pos:end]
        if not body:
            raise StructuralError(f"dangling sign in {text!r}")
        raw_terms.append((sign, body))
        pos = end
    parsed = []
    max_var = 0
    for sign, body in raw_terms:
        p = 0
        coef = Fraction(1)
        m = _COEF_RE.match(body, p)
        if m:
            coef = Fraction(int(m.group(1)), int(m.group(2) or 1))
            if m.group(2) is not None and int(m.group(2)) == 0:
                raise StructuralError("zero denominator")
            p = m.end()
        exps: Dict[int, int] = {}
        while p < len(body):
            m = _FACTOR_RE.match(body, p)
            if not m or m.end() == p:
                raise StructuralError(f"cannot parse term {body!r}")
            name = m.group(1)
            idx = _ALIASES[name] if name in _ALIASES else int(m.group(2))
            if idx < 1:
                raise StructuralError("variables are numbered from 1")
            exps[idx] = exps.get(idx, 0) + int(m.group(3) or 1)
            max_var = max(max_var, idx)
            p = m.end()
        if body.endswith("*"):
            raise StructuralError(f"cannot parse term {body!r}")
        parsed.append((sign * coef, exps))
    if arity is None:
        arity = max(max_var, 1)
    elif max_var > arity:
        raise StructuralError(f"variable x{max_var} exceeds arity {arity}")
    terms: Dict[Exps, object] = {}
    for c, exps in parsed:
        e = [0] * arity
        for i, k in exps.items():
            e[i - 1] = k
        e = tuple(e)
        terms[e] = terms.get(e, 0) + c
    return MultiPoly(arity, terms)


def to_text(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.terms, key=lambda e: (-sum(e), [-k for k in e])):
        c = p.terms[e]
        mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        neg = c < 0
        a = -c if neg else c
        if mono:
            cs = "" if a == 1 else f"{a}*"
            body = cs + mono
        else:
            body = str(a)
        parts.append(("-" if neg else "+") + body)
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


def poly_vars(arity: int):
    return [MultiPoly.var(i, arity) for i in range(arity)]


def sum_polys(polys: Iterable[MultiPoly], arity: int) -> MultiPoly:
    total = MultiPoly(arity, {}, _trusted=True)
    for p in polys:
        total = total + p
    return total
