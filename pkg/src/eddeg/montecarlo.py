"""Average ED degree: Gaussian data, count real critical points, average.

Exact-solver models run on dyadic data (Gaussian draws rounded to 2^-40)
so every real-root count is a Sturm count over the integers. For the
planar models the critical system is eliminated once with the data left
symbolic; each sample then only substitutes its data into that univariate
family. The general solver is kept as a cross-check path.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import rng
from .algebra.poly import MultiPoly, parse_poly
from .algebra.resultant import resultant
from .algebra.univariate import _variations, primitive, sturm_sequence
from .errors import DomainError, RetrySignal, StructuralError
from .tensors import AEDEstimate, aed_tensor

DYADIC_BITS = 40
MAX_RETRIES = 8
CHUNK = 4096
MC_STREAM = 0xAED0

ELLIPSE = "x^2+4y^2-4"
CARDIOID = "x^4+2x^2y^2+y^4+2x^3+2xy^2-y^2"

# evolute fixtures; negative values mean "inside"
LAME_SEXTIC = ("64u^6+48u^4v^2+12u^2v^4+v^6-432u^4+756u^2v^2-27v^4"
               "+972u^2+243v^2-729")
INNER_CARDIOID = "27u^4+54u^2v^2+27v^4+54u^3+54uv^2+36u^2+9v^2+8u"

MODEL_KINDS = ("ellipse", "cardioid", "rnc", "gamma3", "matrix", "tensor")


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise StructuralError(f"unknown model {self.kind!r}")
        if self.kind == "rnc" and (len(self.params) != 1 or not 1 <= self.params[0] <= 12):
            raise DomainError("rational normal curve needs 1 <= n <= 12")
        if self.kind == "matrix":
            if len(self.params) != 3:
                raise StructuralError("matrix model needs (s, t, r)")
            s, t, r = self.params
            if not (1 <= s <= t and 0 <= r <= s):
                raise DomainError("need 1 <= s <= t and 0 <= r <= s")
        if self.kind == "tensor" and len(self.params) < 2:
            raise StructuralError("tensor model needs at least two dimensions")

    @property
    def ambient(self) -> int:
        return {"ellipse": 2, "cardioid": 2, "gamma3": 3}.get(self.kind) or (
            self.params[0] + 1 if self.kind == "rnc" else
            self.params[0] * self.params[1] if self.kind == "matrix" else
            math.prod(self.params))

    @property
    def ed_degree(self) -> int:
        if self.kind == "ellipse":
            return 4
        if self.kind == "cardioid":
            return 3
        if self.kind == "gamma3":
            return 5
        if self.kind == "rnc":
            return self.params[0]
        if self.kind == "matrix":
            return math.comb(self.params[0], self.params[2])
        from .tensors import ed_segre
        return ed_segre(self.params)

    @property
    def name(self) -> str:
        if not self.params:
            return self.kind
        return self.kind + "(" + ",".join(map(str, self.params)) + ")"

    @classmethod
    def parse(cls, text: str) -> "ModelSpec":
        """'ellipse', 'rnc:3', 'matrix:3,4,1', 'tensor:2,2,2'."""
        kind, _, rest = text.strip().lower().partition(":")
        try:
            params = tuple(int(x) for x in rest.split(",")) if rest else ()
        except ValueError:
            raise StructuralError(f"bad model parameters in {text!r}") from None
        return cls(kind, params)


# ------------------------------------------------------------ univariate families

class ParamFamily:
    """A univariate polynomial in x whose coefficients are polynomials in data.

    ``poly`` has arity 1 + k: variable 0 is x, the rest are data. Factors x^m
    that vanish identically in the data are removed once.
    """

    def __init__(self, poly: MultiPoly):
        k = poly.arity - 1
        self.k = k
        table: Dict[int, List[Tuple[Tuple[int, ...], Fraction]]] = {}
        for e, c in poly.terms.items():
            table.setdefault(e[0], []).append((e[1:], Fraction(c)))
        if not table:
            raise DomainError("zero family")
        self.low = min(table)
        self.high = max(table)
        self.E = max(sum(e) for terms in table.values() for e, _ in terms)
        den = 1
        for terms in table.values():
            for _, c in terms:
                den = den * c.denominator // math.gcd(den, c.denominator)
        self.rows = [[(e, int(c * den)) for e, c in table.get(a, [])]
                     for a in range(self.low, self.high + 1)]

    @property
    def degree(self) -> int:
        return self.high - self.low

    def at(self, data: Sequence[int], bits: int = DYADIC_BITS) -> List[int]:
        """Integer coefficients (up to a positive factor) at data = ints / 2^bits."""
        E = self.E
        out = []
        for row in self.rows:
            v = 0
            for e, c in row:
                t = c << (bits * (E - sum(e)))
                for d, k in zip(data, e):
                    if k:
                        t *= d ** k
                v += t
            out.append(v)
        return out


def real_roots_exact(coeffs: Sequence[int], degree: int) -> int:
    """Distinct real roots of an integer polynomial; RetrySignal if the data is special."""
    c = list(coeffs)
    if len(c) != degree + 1 or c[-1] == 0 or c[0] == 0:
        raise RetrySignal("degree drop at this data point")
    try:
        seq = sturm_sequence(primitive(c))
    except DomainError:
        raise RetrySignal("repeated critical point at this data point") from None
    return _variations(seq, float("-inf")) - _variations(seq, float("inf"))


def _curve_family(text: str) -> ParamFamily:
    f = parse_poly(text, 2)
    x, y, u, v = (MultiPoly.var(i, 4) for i in range(4))
    F = f.compose([x, y])
    g = (u - x) * F.diff(1) - (v - y) * F.diff(0)
    R = resultant(F, g, 1)
    # drop the eliminated slot: (x, y, u, v) -> (x, u, v)
    X, U, V = (MultiPoly.var(i, 3) for i in range(3))
    return ParamFamily(R.compose([X, MultiPoly.const(0, 3), U, V]))


def _gamma3_family() -> ParamFamily:
    # t1 = (u1 + u3 t2) / (1 + t2^2) eliminated from the gradient of
    # (t1-u1)^2 + (t2-u2)^2 + (t1 t2 - u3)^2
    t, u1, u2, u3 = (MultiPoly.var(i, 4) for i in range(4))
    one = MultiPoly.const(1, 4)
    w = one + t * t
    a = u1 + u3 * t
    return ParamFamily((t - u2) * w * w + t * a * a - u3 * a * w)


@lru_cache(maxsize=None)
def _family(kind: str) -> ParamFamily:
    if kind == "ellipse":
        return _curve_family(ELLIPSE)
    if kind == "cardioid":
        return _curve_family(CARDIOID)
    if kind == "gamma3":
        return _gamma3_family()
    raise KeyError(kind)


def _dyadic(x: float, bits: int = DYADIC_BITS) -> int:
    if not math.isfinite(x):
        raise DomainError("data must be finite")
    return round(x * (1 << bits))


def _as_dyadic(u, bits: int = DYADIC_BITS) -> List[int]:
    out = []
    for c in u:
        if isinstance(c, Fraction) or isinstance(c, int):
            q = Fraction(c) * (1 << bits)
            if q.denominator != 1:
                raise DomainError(f"exact data must be a multiple of 2^-{bits}")
            out.append(int(q))
        else:
            out.append(_dyadic(float(c), bits))
    return out


def _rnc_coeffs(n: int, a: Sequence[int]) -> List[int]:
    """h(1, t) for h = t dp/ds - s dp/dt and p = sum a_i s^(n-i) t^i."""
    out = []
    for k in range(n + 1):
        v = 0
        if k >= 1:
            v += a[k - 1] * (n - k + 1)
        if k + 1 <= n:
            v -= a[k + 1] * (k + 1)
        out.append(v)
    return out


def real_count(model: ModelSpec, u, method: str = "fast") -> int:
    """Number of real critical points of the squared distance from u.

    ``method='solver'`` routes the planar and Gamma3 models through the
    general critical-point solver instead of the pre-eliminated family.
    """
    if len(u) != model.ambient:
        raise StructuralError(f"{model.name} needs data of length {model.ambient}")
    kind = model.kind
    if kind == "matrix":
        return model.ed_degree
    if kind == "tensor":
        raise DomainError("tensor models are estimated through the ensemble, not per sample")
    if kind == "rnc":
        n = model.params[0]
        a = [_dyadic(float(c) * math.sqrt(math.comb(n, i))) for i, c in enumerate(u)]
        # real roots in P^1; special data (root at t = 0 or infinity) is redrawn
        return real_roots_exact(_rnc_coeffs(n, a), n)
    data = _as_dyadic(u)
    if method == "solver":
        return _real_count_solver(kind, data)
    fam = _family(kind)
    return real_roots_exact(fam.at(data), fam.degree)


def _real_count_solver(kind: str, data: Sequence[int]) -> int:
    from .solver.curves import PlaneCurve, count_critical
    from .solver.param import param_critical_count
    u = [Fraction(d, 1 << DYADIC_BITS) for d in data]
    if kind == "gamma3":
        psi = [parse_poly(s, 2) for s in ("t1", "t2", "t1*t2")]
        return param_critical_count(psi, u).real_count
    text = ELLIPSE if kind == "ellipse" else CARDIOID
    sing = [(0, 0)] if kind == "cardioid" else ()
    return count_critical(PlaneCurve.parse(text, singular=sing), u).real_count


def lame_sextic(u, v):
    return _fixture(LAME_SEXTIC, u, v)


def inner_cardioid(u, v):
    return _fixture(INNER_CARDIOID, u, v)


def _fixture(text, u, v):
    p = parse_poly(text.replace("u", "x").replace("v", "y"), 2)
    return p.evaluate([Fraction(u), Fraction(v)])


# ------------------------------------------------------------ estimation

def sample_data(model: ModelSpec, seed: int, index: int, attempt: int = 0) -> List[float]:
    """Standard Gaussian data for one sample; retries use derived streams."""
    return rng.normals(seed, MC_STREAM + attempt, index, model.ambient)


def _chunk(args):
    kind, params, seed, start, stop = args
    model = ModelSpec(kind, tuple(params))
    counts = Counter()
    retries = 0
    for i in range(start, stop):
        for attempt in range(MAX_RETRIES):
            try:
                c = real_count(model, sample_data(model, seed, i, attempt))
                break
            except RetrySignal:
                retries += 1
        else:
            raise RetrySignal(f"sample {i}: data stayed special after {MAX_RETRIES} draws")
        counts[c] += 1
    return dict(counts), retries


@dataclass
class EstimateDiagnostics:
    retry_rate: float
    warnings: List[str] = field(default_factory=list)


def aed_estimate(model: ModelSpec, samples: int, seed: int = 0, workers: int = 1,
                 progress=None) -> AEDEstimate:
    """Average number of real critical points over standard Gaussian data.

    The result depends only on (model, samples, seed): samples are processed
    in fixed chunks and the histograms are merged in chunk order.
    """
    if samples < 100:
        raise DomainError("need at least 100 samples")
    if workers < 1:
        raise DomainError("workers must be positive")
    if model.kind == "tensor":
        return aed_tensor(model.params, samples, seed, workers)
    jobs = [(model.kind, model.params, seed, s, min(s + CHUNK, samples))
            for s in range(0, samples, CHUNK)]
    if model.kind == "matrix":
        parts = [({model.ed_degree: samples}, 0)]
    elif workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = []
            for p in ex.map(_chunk, jobs):
                parts.append(p)
                if progress:
                    progress(len(parts), len(jobs))
    else:
        parts = []
        for j in jobs:
            parts.append(_chunk(j))
            if progress:
                progress(len(parts), len(jobs))
    hist = Counter()
    retries = 0
    for h, r in parts:
        hist.update(h)
        retries += r
    total = sum(k * v for k, v in hist.items())
    total2 = sum(k * k * v for k, v in hist.items())
    mean = total / samples
    var = max(total2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return AEDEstimate(mean, math.sqrt(var / samples), samples, seed,
                       dict(sorted(hist.items())), retries, model.name)


def retry_warning(est: AEDEstimate) -> Optional[str]:
    if est.samples and est.retries > 0.01 * est.samples:
        return f"retry rate {est.retries / est.samples:.2%} exceeds 1%"
    return None


# ------------------------------------------------------------ ellipse quadrature

def ellipse_integrand(t: float, s: float) -> Tuple[float, float]:
    """(|Jacobian|, exponent) of the ellipse ED-correspondence parametrization."""
    w = 1 + 4 * t * t
    J = -32 * (1 + s + 4 * (2 * s - 1) * t * t + 16 * (1 + s) * t ** 4) / w ** 3
    ex = (-(1 + 4 * s) ** 2 - 8 * (7 - 8 * (s - 1) * s) * t * t
          - 16 * (1 + 4 * s) ** 2 * t ** 4) / (2 * w * w)
    return abs(J), ex


_erf = np.frompyfunc(math.erf, 1, 1)


def _inner_s(t: np.ndarray) -> np.ndarray:
    """Closed form of the s-integral of |J| e^exponent / (2 pi) at fixed t.

    |J| = 32 c |s - s0| with c = 1/(1+4t^2), and the exponent is
    -(A s^2 + B s + C)/2, so the integral is a folded-Gaussian moment.
    """
    c = 1.0 / (1 + 4 * t * t)
    P = 64 * t * t * c * c
    Q = (4 * t * t - 1) ** 2 * c * c
    A = P + 16 * Q
    B = 2 * P + 8 * Q
    C = P + Q
    s0 = -(1 - 4 * t * t + 16 * t ** 4) / (1 + 4 * t * t) ** 2
    m = B / (2 * A)
    d = s0 + m
    sig = 1 / np.sqrt(A)
    fold = sig * np.sqrt(2 / np.pi) * np.exp(-d * d / (2 * sig * sig)) \
        + d * _erf(d / (sig * np.sqrt(2))).astype(float)
    I = np.sqrt(2 * np.pi) * sig * fold
    return 32 * c * np.exp(-(C - A * m * m) / 2) * I / (2 * np.pi)


def _trapezoid_theta(N: int) -> float:
    # t = tan(theta/2)/2 maps (-pi, pi) onto the line; the integrand is periodic
    theta = -np.pi + 2 * np.pi * (np.arange(N) + 0.5) / N
    t = np.tan(theta / 2) / 2
    jac = (1 + 4 * t * t) / 4
    return float(np.sum(_inner_s(t) * jac) * 2 * np.pi / N)


def aed_quadrature_ellipse(resolution: int = 256, tol: float = 1e-10) -> float:
    """Average ED degree of the ellipse x^2 + 4y^2 = 4 by quadrature.

    The s-integral is done in closed form; the t-integral by the trapezoid
    rule in an angle variable, doubled until two Richardson-extrapolated
    levels agree.
    """
    if resolution < 64:
        raise DomainError("resolution must be at least 64")
    N = resolution
    prev = None
    levels = [_trapezoid_theta(N)]
    for _ in range(8):
        N *= 2
        levels.append(_trapezoid_theta(N))
        a, b = levels[-2], levels[-1]
        rich = b + (b - a) / 3
        if prev is not None and abs(rich - prev) <= tol:
            return rich
        prev = rich
    raise DomainError("quadrature did not converge")
