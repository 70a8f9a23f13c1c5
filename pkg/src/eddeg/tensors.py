"""ED degrees of Segre and Segre–Veronese varieties by coefficient extraction,
and average ED degrees of rank-one tensors through a random symmetric
matrix ensemble."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Sequence, Tuple

import numpy as np

from .algebra.poly import MultiPoly
from .errors import DomainError, StructuralError
from . import rng

TENSOR_STREAM = 0x7E45  # stream id reserved for the tensor ensemble
CHUNK = 1 << 15


@dataclass(frozen=True)
class TensorShape:
    dims: Tuple[int, ...]
    weights: Tuple[int, ...] = ()

    def __post_init__(self):
        dims = tuple(int(m) for m in self.dims)
        w = tuple(int(x) for x in self.weights) or (1,) * len(dims)
        if not dims:
            raise DomainError("need at least one factor")
        if len(w) != len(dims):
            raise StructuralError("dims and weights must have equal length")
        if any(m < 1 for m in dims) or any(x < 1 for x in w):
            raise DomainError("dims and weights must be >= 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "weights", w)

    @property
    def plain(self) -> bool:
        return all(x == 1 for x in self.weights)

    def require_ensemble(self):
        if not self.plain:
            raise DomainError("the ensemble is defined for plain Segre shapes")
        if any(m < 2 for m in self.dims):
            raise DomainError("the ensemble needs every factor of dimension >= 2")


def _pruned_mul(a: Dict, b: Dict, cap: Tuple[int, ...]) -> Dict:
    out: Dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if all(x <= m for x, m in zip(e, cap)):
                out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _factor(i: int, shape: TensorShape, cap) -> MultiPoly:
    """sum_{k=0}^{m_i - 1} zhat_i^k z_i^{m_i-1-k}, zhat_i = sum_j w_j z_j - z_i."""
    p = len(shape.dims)
    z = [MultiPoly.var(j, p) for j in range(p)]
    zhat = MultiPoly.const(0, p)
    for j in range(p):
        zhat = zhat + z[j] * shape.weights[j]
    zhat = zhat - z[i]
    m = shape.dims[i]
    total = {}
    zh_pow = {(0,) * p: 1}
    for k in range(m):
        zi = [0] * p
        zi[i] = m - 1 - k
        term = _pruned_mul(zh_pow, {tuple(zi): 1}, cap)
        for e, c in term.items():
            total[e] = total.get(e, 0) + c
        zh_pow = _pruned_mul(zh_pow, zhat.terms, cap)
    return MultiPoly(p, total)


def segre_generating_poly(shape: TensorShape, prune: bool = True) -> MultiPoly:
    """The product whose z^(m-1) coefficient is the ED degree.

    With ``prune`` only monomials that can still reach the target survive.
    """
    p = len(shape.dims)
    target = tuple(m - 1 for m in shape.dims)
    cap = target if prune else tuple(sum(target) * 4 for _ in target)
    acc = {(0,) * p: 1}
    for i in range(p):
        acc = _pruned_mul(acc, _factor(i, shape, cap).terms, cap)
    return MultiPoly(p, acc)


def ed_segre_veronese(shape: TensorShape) -> int:
    target = tuple(m - 1 for m in shape.dims)
    return int(segre_generating_poly(shape).terms.get(target, 0))


def ed_segre(dims: Sequence[int]) -> int:
    return ed_segre_veronese(TensorShape(tuple(dims)))


# ------------------------------------------------------------ random ensemble

@dataclass(frozen=True)
class EnsembleMatrix:
    blocks: Tuple[int, ...]
    A: np.ndarray = field(compare=False)

    @property
    def m(self) -> int:
        return sum(self.blocks)


def _block_labels(shape: TensorShape):
    labels = []
    for b, m in enumerate(shape.dims):
        labels.extend([b] * (m - 1))
    return labels


def _cross_pairs(shape: TensorShape):
    lab = _block_labels(shape)
    n = len(lab)
    return [(k, l) for k in range(n) for l in range(k + 1, n) if lab[k] != lab[l]]


@dataclass(frozen=True)
class Stream:
    """Per-sample generator handle keyed by (seed, sample index)."""
    seed: int
    index: int
    stream: int = TENSOR_STREAM

    def normals(self, count: int):
        return rng.normals(self.seed, self.stream, self.index, count)


def sample_ensemble(shape: TensorShape | Sequence[int], rng_stream: Stream) -> EnsembleMatrix:
    """One draw: U0 on the diagonal, N(0,1) on cross-block entries, 0 elsewhere."""
    if not isinstance(shape, TensorShape):
        shape = TensorShape(tuple(shape))
    shape.require_ensemble()
    pairs = _cross_pairs(shape)
    m = sum(d - 1 for d in shape.dims)
    z = rng_stream.normals(1 + len(pairs))
    A = np.zeros((m, m))
    A[np.diag_indices(m)] = z[0]
    for (k, l), v in zip(pairs, z[1:]):
        A[k, l] = A[l, k] = v
    return EnsembleMatrix(tuple(d - 1 for d in shape.dims), A)


def _half_gamma(k: int):
    """Gamma(k/2) = q * sqrt(pi)^e with q rational; returns (q, e)."""
    if k % 2 == 0:
        return Fraction(math.factorial(k // 2 - 1)), 0
    q = Fraction(1)
    x = Fraction(1, 2)
    while x < Fraction(k, 2):
        q *= x
        x += 1
    return q, 1


def gamma_constant(dims: Sequence[int]) -> float:
    """pi^(p/2) / (2^(m/2) prod Gamma(m_i/2))."""
    p = len(dims)
    m = sum(d - 1 for d in dims)
    q = Fraction(1)
    pi_half_powers = p  # powers of sqrt(pi)
    for d in dims:
        qi, e = _half_gamma(d)
        q *= qi
        pi_half_powers -= e
    return math.pi ** (pi_half_powers / 2) / (2 ** (m / 2) * float(q))


@dataclass(frozen=True)
class AEDEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    histogram: Dict[int, int] = field(default_factory=dict)
    retries: int = 0
    model: str = ""

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "samples": self.samples,
            "seed": self.seed,
            "mean": self.mean,
            "stderr": self.stderr,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "retries": self.retries,
        }


def _chunk_absdet(args):
    dims, seed, start, stop = args
    shape = TensorShape(tuple(dims))
    pairs = _cross_pairs(shape)
    m = sum(d - 1 for d in dims)
    idx = np.arange(start, stop, dtype=np.uint64)
    z = rng.normals_np(seed, TENSOR_STREAM, idx, 1 + len(pairs))
    A = np.zeros((stop - start, m, m))
    ii = np.arange(m)
    A[:, ii, ii] = z[0][:, None]
    for t, (k, l) in enumerate(pairs):
        A[:, k, l] = z[t + 1]
        A[:, l, k] = z[t + 1]
    vals = np.abs(np.linalg.det(A))
    return math.fsum(vals.tolist()), math.fsum((vals * vals).tolist())


def aed_tensor(shape: TensorShape | Sequence[int], samples: int, seed: int = 0, workers: int = 1) -> AEDEstimate:
    """Monte Carlo average ED degree of the Segre variety of the given format."""
    if not isinstance(shape, TensorShape):
        shape = TensorShape(tuple(shape))
    shape.require_ensemble()
    if samples < 1:
        raise DomainError("need at least one sample")
    jobs = [(shape.dims, seed, s, min(s + CHUNK, samples)) for s in range(0, samples, CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_absdet, jobs))
    else:
        parts = [_chunk_absdet(j) for j in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    c = gamma_constant(shape.dims)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    return AEDEstimate(c * mean, c * math.sqrt(var / samples), samples, seed,
                       model="tensor" + "x".join(map(str, shape.dims)))
