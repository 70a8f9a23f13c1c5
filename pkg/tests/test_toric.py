import pytest

from eddeg.errors import DomainError, StructuralError
from eddeg.formulas import ed_smooth_curve, ed_veronese_generic
from eddeg.toric import (LatticePolytope, cube, dilate, ed_toric, enumerate_faces, product_polytope,
                         read_polytope, segment, simplex, simplex_product)

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_unit_square():
    t = enumerate_faces(LatticePolytope.from_points(SQUARE))
    assert t.f == (4, 4, 1)
    assert t.V == (4, 4, 2)
    assert ed_toric(LatticePolytope.from_points(SQUARE)) == 6


def test_cube():
    t = enumerate_faces(cube(3))
    assert t.V == (8, 12, 12, 6)
    assert ed_toric(cube(3)) == 34
    brute = enumerate_faces(cube(3), brute_force=True)
    assert brute.V == t.V and brute.f == t.f


def test_segments():
    for n in range(1, 13):
        P = segment(n)
        assert enumerate_faces(P).V == (2, n)
        assert ed_toric(P) == 3 * n - 2 == ed_smooth_curve(n, 0)
    P = LatticePolytope.from_points([(0, 0), (3, 6)])
    assert enumerate_faces(P).V == (2, 3)


def test_triangle_and_dilation():
    tri = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2)])
    assert ed_toric(tri) == 13
    assert ed_toric(dilate(simplex(2), 2)) == 13


def test_simplex_products():
    assert ed_toric(simplex_product([1, 1])) == 6
    assert ed_toric(simplex_product([1, 2])) == 10
    assert ed_toric(product_polytope(simplex(1), simplex(2))) == 10


def test_determinantal_row():
    row = {(2, 2): 6, (2, 3): 10, (2, 4): 14, (2, 5): 18, (3, 3): 39,
           (3, 4): 83, (3, 5): 143, (4, 4): 284, (4, 5): 676, (5, 5): 2205}
    for (s, t), val in row.items():
        P = simplex_product([s - 1, t - 1])
        assert ed_toric(P) == val
        if s * t <= 16:
            assert ed_toric(P, enumerate_faces(P, brute_force=True)) == val


def test_veronese_agreement():
    for m in range(1, 4):
        for d in range(1, 4):
            P = dilate(simplex(m), d)
            assert ed_toric(P) == ed_veronese_generic(m, d)
            assert ed_toric(P, enumerate_faces(P, brute_force=True)) == ed_veronese_generic(m, d)


def test_euler_characteristic():
    polys = [LatticePolytope.from_points(SQUARE), cube(3), segment(4), simplex(3),
             simplex_product([1, 2]), LatticePolytope.from_points([(0, 0, 0), (2, 0, 0), (0, 3, 0), (0, 0, 1), (1, 1, 1)])]
    for P in polys:
        assert enumerate_faces(P).euler == 1
        assert enumerate_faces(P, brute_force=True).euler == 1


def test_rejects_non_vertex():
    with pytest.raises(StructuralError):
        LatticePolytope.from_points([(0, 0), (2, 0), (0, 2), (1, 0)])


def test_vertex_budget():
    with pytest.raises(DomainError):
        LatticePolytope.from_points([(i, i * i) for i in range(17)])


def test_read_polytope():
    P = read_polytope("# unit square\n0 0\n1 0\n\n0 1\n1 1\n")
    assert ed_toric(P) == 6
    with pytest.raises(StructuralError):
        read_polytope("0 0\n1\n")
    with pytest.raises(StructuralError):
        read_polytope("a b\n")
