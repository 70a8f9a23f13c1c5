"""Lattice polytopes, their face lattices and lattice-normalized face volumes,
and the toric ED degree sum_j (-1)^(m-j) (2^(j+1) - 1) V_j.

The toric formula assumes a smooth projective toric variety; smoothness is
the caller's responsibility and is not checked here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, factorial, gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import DomainError, StructuralError

MAX_VERTICES = 16

Vec = Tuple[int, ...]


# ------------------------------------------------------------ integer linear algebra

def column_reduce(rows: Sequence[Sequence[int]]):
    """Unimodular column operations W with rows*W = [H | 0].

    Returns (k, W) where k = rank. The first k rows of W^-1 form a basis of
    the saturated lattice span_Q(rows) ∩ Z^m, and for a lattice point p of
    that span, (p W)[:k] are its integer coordinates in that basis.
    """
    A = [list(r) for r in rows]
    m = len(A[0]) if A else 0
    W = [[int(i == j) for j in range(m)] for i in range(m)]

    def colop(p, j, a, b, c, d):
        # (col_p, col_j) <- (a col_p + b col_j, c col_p + d col_j), ad - bc = ±1
        for M in (A, W):
            for r in M:
                x, y = r[p], r[j]
                r[p], r[j] = a * x + b * y, c * x + d * y

    p = 0
    for i in range(len(A)):
        if p >= m:
            break
        for j in range(p + 1, m):
            x, y = A[i][p], A[i][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            # new col_p = s col_p + t col_j has entry g; col_j = -y/g col_p + x/g col_j -> 0
            colop(p, j, s, t, -y // g, x // g)
        if A[i][p] != 0:
            p += 1
    return p, W


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_coords(points: Sequence[Vec]):
    """Coordinates of the points in the saturated lattice of their affine hull."""
    base = points[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    if not diffs or all(not any(d) for d in diffs):
        return 0, [() for _ in points]
    k, W = column_reduce(diffs)
    out = []
    for p in points:
        d = [a - b for a, b in zip(p, base)]
        c = [sum(d[r] * W[r][j] for r in range(len(d))) for j in range(k)]
        out.append(tuple(c))
    return k, out


def _det(M: List[List[int]]) -> int:
    """Bareiss on integers."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _normal(vecs: List[Vec]) -> Vec:
    """Primitive integer vector orthogonal to d-1 vectors in Z^d (cofactors)."""
    d = len(vecs) + 1
    a = []
    for j in range(d):
        minor = [[v[c] for c in range(d) if c != j] for v in vecs]
        a.append((-1) ** j * _det(minor))
    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        return tuple(a)
    return tuple(x // g for x in a)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ------------------------------------------------------------ types

@dataclass(frozen=True)
class LatticePolytope:
    dim_ambient: int
    vertices: Tuple[Vec, ...]
    structure: Optional[tuple] = None  # known combinatorial type, see simplex_product / dilated_simplex

    def __post_init__(self):
        if not self.vertices:
            raise StructuralError("polytope needs at least one vertex")
        for v in self.vertices:
            if len(v) != self.dim_ambient or any(not isinstance(x, int) for x in v):
                raise StructuralError("vertices must be integer vectors of the ambient dimension")
        if len(set(self.vertices)) != len(self.vertices):
            raise StructuralError("vertices must be distinct")
        if self.structure is None:
            if len(self.vertices) > MAX_VERTICES:
                raise DomainError(f"more than {MAX_VERTICES} vertices; use a structured constructor")
            _face_lattice(self.vertices)  # validates extremality

    @classmethod
    def from_points(cls, pts: Sequence[Sequence[int]], structure=None) -> "LatticePolytope":
        vs = tuple(tuple(int(x) for x in p) for p in pts)
        return cls(len(vs[0]), vs, structure)

    @property
    def dim(self) -> int:
        return lattice_coords(self.vertices)[0]


@dataclass
class FaceTable:
    faces: List[List[Tuple[FrozenSet[int], int]]]
    V: Tuple[int, ...]
    f: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        self.f = tuple(len(fs) for fs in self.faces)

    @property
    def euler(self) -> int:
        return sum((-1) ** j * n for j, n in enumerate(self.f))


# ------------------------------------------------------------ brute force enumeration

def _facets(coords: List[Vec], k: int) -> List[FrozenSet[int]]:
    """Facets of a full-dimensional point set in Z^k as index sets."""
    n = len(coords)
    if k == 0:
        return []
    if k == 1:
        xs = [c[0] for c in coords]
        lo, hi = min(xs), max(xs)
        return [frozenset(i for i, x in enumerate(xs) if x == lo),
                frozenset(i for i, x in enumerate(xs) if x == hi)]
    found = set()
    for sub in combinations(range(n), k):
        base = coords[sub[0]]
        vecs = [tuple(a - b for a, b in zip(coords[i], base)) for i in sub[1:]]
        a = _normal(vecs)
        if not any(a):
            continue
        b = _dot(a, base)
        vals = [_dot(a, c) - b for c in coords]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            on = frozenset(i for i, v in enumerate(vals) if v == 0)
            found.add(on)
    return list(found)


def _face_lattice(vertices: Sequence[Vec]):
    """All non-empty faces as index sets, keyed by dimension."""
    k, coords = lattice_coords(list(vertices))
    n = len(vertices)
    full = frozenset(range(n))
    facets = _facets(coords, k)
    faces = {full}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        nxt = set()
        for F in frontier:
            for G in facets:
                H = F & G
                if H and H not in faces:
                    nxt.add(H)
        frontier = nxt
    bydim: Dict[int, List[FrozenSet[int]]] = {}
    for F in faces:
        d = lattice_coords([vertices[i] for i in sorted(F)])[0]
        bydim.setdefault(d, []).append(F)
    singletons = {next(iter(F)) for F in bydim.get(0, [])}
    if singletons != set(range(n)):
        bad = sorted(set(range(n)) - singletons)
        raise StructuralError(f"vertices {bad} are not extreme points")
    for F in bydim.get(0, []):
        if len(F) != 1:
            raise StructuralError("repeated vertex")
    return k, [sorted(bydim.get(j, []), key=sorted) for j in range(k + 1)]


def _normalized_volumes(vertices, lattice) -> List[List[Tuple[FrozenSet[int], int]]]:
    """NV(G) = sum over facets F of G avoiding an apex v of h(v, F) * NV(F)."""
    nv: Dict[FrozenSet[int], int] = {}
    out = []
    for j, faces in enumerate(lattice):
        row = []
        for G in faces:
            if j == 0:
                nv[G] = 1
            else:
                idx = sorted(G)
                _, coords = lattice_coords([vertices[i] for i in idx])
                pos = {v: t for t, v in enumerate(idx)}
                apex = idx[0]
                total = 0
                for F in lattice[j - 1]:
                    if F <= G and apex not in F:
                        fi = sorted(F)
                        base = coords[pos[fi[0]]]
                        if j == 1:
                            h = abs(coords[pos[apex]][0] - base[0])
                        else:
                            vecs = []
                            # j-1 independent directions inside F
                            for i in fi[1:]:
                                v = tuple(a - b for a, b in zip(coords[pos[i]], base))
                                trial = vecs + [v]
                                if _rank(trial) == len(trial):
                                    vecs = trial
                                if len(vecs) == j - 1:
                                    break
                            a = _normal(vecs)
                            h = abs(_dot(a, coords[pos[apex]]) - _dot(a, base))
                        total += h * nv[F]
                nv[G] = total
            row.append((G, nv[G]))
        out.append(row)
    return out


def _rank(vecs) -> int:
    if not vecs:
        return 0
    return column_reduce(vecs)[0]


# ------------------------------------------------------------ structured polytopes

def _simplex_vertices(m: int) -> List[Vec]:
    """Standard simplex Δ_m in Z^m: origin and unit vectors."""
    return [tuple(0 for _ in range(m))] + [tuple(int(i == j) for j in range(m)) for i in range(m)]


def simplex(m: int) -> LatticePolytope:
    return LatticePolytope.from_points(_simplex_vertices(m), structure=("simplex_product", (m,)))


def segment(n: int) -> LatticePolytope:
    if n < 1:
        raise DomainError("segment length must be positive")
    return LatticePolytope.from_points([(0,), (n,)], structure=("dilated_simplex", 1, n))


def cube(d: int) -> LatticePolytope:
    return simplex_product([1] * d)


def simplex_product(dims: Sequence[int]) -> LatticePolytope:
    """Δ_{a1} × ... × Δ_{ap}."""
    parts = [_simplex_vertices(a) for a in dims]
    verts = [tuple(x for part in combo for x in part) for combo in product(*parts)]
    return LatticePolytope.from_points(verts, structure=("simplex_product", tuple(dims)))


def dilate(P: LatticePolytope, k: int) -> LatticePolytope:
    if k < 1:
        raise DomainError("dilation factor must be positive")
    verts = [tuple(k * x for x in v) for v in P.vertices]
    st = None
    if P.structure and P.structure[0] == "simplex_product" and len(P.structure[1]) == 1:
        st = ("dilated_simplex", P.structure[1][0], k)
    elif P.structure and P.structure[0] == "dilated_simplex":
        st = ("dilated_simplex", P.structure[1], P.structure[2] * k)
    return LatticePolytope(P.dim_ambient, tuple(verts), st)


def product_polytope(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    verts = tuple(a + b for a in P.vertices for b in Q.vertices)
    st = None
    sp, sq = P.structure, Q.structure
    if sp and sq and sp[0] == sq[0] == "simplex_product":
        st = ("simplex_product", sp[1] + sq[1])
    elif len(verts) > MAX_VERTICES:
        raise DomainError(f"product has {len(verts)} vertices, budget is {MAX_VERTICES}")
    return LatticePolytope(P.dim_ambient + Q.dim_ambient, verts, st)


def _structured_table(P: LatticePolytope) -> FaceTable:
    kind = P.structure[0]
    if kind == "dilated_simplex":
        _, m, k = P.structure
        faces = [[] for _ in range(m + 1)]
        for size in range(1, m + 2):
            for S in combinations(range(m + 1), size):
                faces[size - 1].append((frozenset(S), k ** (size - 1)))
        V = tuple(comb(m + 1, j + 1) * k ** j for j in range(m + 1))
        return FaceTable(faces, V)
    dims = P.structure[1]
    total = sum(dims)
    # vertex index of a tuple of simplex-vertex choices, matching simplex_product order
    strides = []
    s = 1
    for a in reversed(dims):
        strides.append(s)
        s *= a + 1
    strides = strides[::-1]
    faces = [[] for _ in range(total + 1)]
    subsets = [[S for r in range(1, a + 2) for S in combinations(range(a + 1), r)] for a in dims]
    for choice in product(*subsets):
        fd = [len(S) - 1 for S in choice]
        d = sum(fd)
        nvol = factorial(d)
        for x in fd:
            nvol //= factorial(x)
        idx = frozenset(sum(c * st for c, st in zip(combo, strides)) for combo in product(*choice))
        faces[d].append((idx, nvol))
    V = tuple(sum(v for _, v in row) for row in faces)
    return FaceTable(faces, V)


def enumerate_faces(P: LatticePolytope, brute_force: bool | None = None) -> FaceTable:
    """Face lattice with lattice-normalized volumes.

    Structured polytopes (simplex products, dilated simplices) use their
    known face lattices unless ``brute_force`` is requested.
    """
    if brute_force is None:
        brute_force = P.structure is None
    if not brute_force:
        return _structured_table(P)
    if len(P.vertices) > MAX_VERTICES:
        raise DomainError(f"more than {MAX_VERTICES} vertices for brute-force enumeration")
    _, lattice = _face_lattice(P.vertices)
    faces = _normalized_volumes(P.vertices, lattice)
    V = tuple(sum(v for _, v in row) for row in faces)
    return FaceTable(faces, V)


def ed_toric(P: LatticePolytope, table: FaceTable | None = None) -> int:
    T = table or enumerate_faces(P)
    m = len(T.V) - 1
    return sum((-1) ** (m - j) * (2 ** (j + 1) - 1) * v for j, v in enumerate(T.V))


def read_polytope(text: str) -> LatticePolytope:
    """Lines of whitespace-separated integers; '#' starts a comment line."""
    pts = []
    for ln, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            pts.append(tuple(int(x) for x in s.split()))
        except ValueError:
            raise StructuralError(f"line {ln}: non-integer coordinate") from None
    if not pts:
        raise StructuralError("no vertices")
    if len({len(p) for p in pts}) != 1:
        raise StructuralError("all vertex lines must have the same length")
    return LatticePolytope.from_points(pts)
