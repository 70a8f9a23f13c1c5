from math import comb

import pytest

from eddeg.errors import DomainError
from eddeg.formulas import (ChernDegrees, PolarClasses, ed_after_projection, ed_after_section,
                            ed_bezier, ed_cayley_menger, ed_discriminant_degree, ed_eckart_young,
                            ed_eigen_count, ed_from_chern, ed_from_polar, ed_generic_ci,
                            ed_generic_hypersurface, ed_generic_parametric, ed_hurwitz,
                            ed_smooth_curve, ed_veronese_generic, polar_reverse, sectional_ed)


def test_generic_ci():
    assert ed_generic_ci(3, (5,), projective=True) == 25
    assert ed_generic_ci(4, (3, 3), projective=True) == 45
    assert ed_generic_ci(4, (3, 3), projective=True) == ed_generic_ci(4, [3, 3], True)
    for n in range(2, 7):
        assert ed_generic_ci(n, (1,) * (n - 1), projective=True) == 1
        assert ed_generic_ci(n, (1,) * n) == 1


def test_generic_ci_sorts_degrees():
    assert ed_generic_ci(5, (2, 4, 3)) == ed_generic_ci(5, (4, 3, 2))


def test_generic_hypersurface():
    assert ed_generic_hypersurface(3, 4) == 16
    assert ed_generic_hypersurface(4, 2) == 6
    for n in range(2, 8):
        for d in range(1, 8):
            assert ed_generic_hypersurface(n, d) == ed_generic_ci(n, (d,), projective=True)


def test_generic_parametric():
    assert ed_generic_parametric(2, 3) == 25
    assert ed_generic_parametric(1, 1) == 1
    assert ed_generic_parametric(2, 2) == 9


def test_bezier():
    assert ed_bezier(1, 1) == 5
    assert ed_bezier(1, 1, projective=True) == 6
    assert ed_bezier(2, 2) == 25
    assert ed_bezier(2, 3, projective=True) == ed_bezier(3, 2, projective=True)


def test_hurwitz_table():
    table = {3: (5, 2), 4: (5, 10), 5: (13, 6), 6: (9, 18), 7: (21, 10)}
    for n, (aff, hom) in table.items():
        assert ed_hurwitz(n) == aff
        assert ed_hurwitz(n, homogeneous=True) == hom
    with pytest.raises(DomainError):
        ed_hurwitz(2)


def test_cayley_menger():
    assert ed_cayley_menger(4) == 13
    assert ed_cayley_menger(3) == 2
    assert ed_cayley_menger(5) == 40


def test_eckart_young():
    assert ed_eckart_young(2, 2, 1) == 2
    for s in range(1, 7):
        for t in range(s, 7):
            assert ed_eckart_young(s, t, s) == 1
            for r in range(1, s + 1):
                assert ed_eckart_young(s, t, r) == comb(s, r)
    assert ed_eckart_young(5, 7, 2) == 10


def test_smooth_curve_and_chern_identity():
    assert ed_smooth_curve(7, 5) == 29
    assert ed_smooth_curve(1, 0) == 1
    for n in range(1, 11):
        assert ed_smooth_curve(n, 0) == 3 * n - 2
    for d in range(1, 11):
        for g in range(0, 6):
            assert ed_from_chern(ChernDegrees((d, 2 - 2 * g))) == ed_smooth_curve(d, g)


def test_from_chern():
    assert ed_from_chern((4, 6, 3)) == 13
    assert ed_from_chern((1, 2)) == 1


def test_polar_classes():
    assert ed_from_polar(PolarClasses((4, 6, 3))) == 13
    assert ed_from_polar((0, 0, 0)) == 0
    for pc in [(4, 6, 3), (1, 2, 5, 0), (3,), (2, 0, 7)]:
        assert ed_from_polar(pc) == ed_from_polar(polar_reverse(pc))
    with pytest.raises(DomainError):
        PolarClasses((1, -1))


def test_projection_and_section():
    assert ed_after_section(13, 4, 2) == 13
    assert ed_after_section(13, 3, 1) == 10
    assert ed_after_projection(13, 3) == 13
    with pytest.raises(DomainError):
        ed_after_projection(13, 1)


def test_sectional():
    assert sectional_ed((4, 6, 3), 4) == (13, 9, 3)
    assert sectional_ed((4, 6, 3, 0), 5) == (13, 9, 3)
    with pytest.raises(DomainError):
        sectional_ed((4, 6, 3), 3)


def test_veronese():
    for n in range(1, 11):
        assert ed_veronese_generic(1, n) == 3 * n - 2
    assert ed_veronese_generic(2, 2) == 13
    assert ed_veronese_generic(3, 2) == 40
    for m in range(1, 9):
        for d in range(1, 9):
            assert isinstance(ed_veronese_generic(m, d), int)


def test_eigen_count():
    assert ed_eigen_count(2, 3) == 3
    assert ed_eigen_count(3, 2) == 3
    for n in range(2, 10):
        assert ed_eigen_count(2, n) == n


def test_discriminant_degrees():
    assert ed_discriminant_degree("generic_hypersurface", n=3, d=2) == 6
    assert ed_discriminant_degree("generic_hypersurface", n=4, d=2) == 12
    assert ed_discriminant_degree("plane_curve", d=4, delta=0, k=0) == 36
    for n in range(1, 10):
        assert ed_discriminant_degree("smooth_space_curve", d=n, g=0) == 6 * n - 6
    for d in range(1, 9):
        v = ed_discriminant_degree("generic_hypersurface", n=3, d=d)
        assert v == 3 * d * (d - 1) == ed_discriminant_degree("plane_curve", d=d, delta=0, k=0)
    with pytest.raises(DomainError):
        ed_discriminant_degree("plane_curve", d=3)
    with pytest.raises(DomainError):
        ed_discriminant_degree("nope", d=3)
