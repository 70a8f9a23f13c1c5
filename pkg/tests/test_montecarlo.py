import json
import math

import numpy as np
import pytest

from eddeg.errors import DomainError, RetrySignal, StructuralError
from eddeg.montecarlo import (ModelSpec, aed_estimate, aed_quadrature_ellipse, ellipse_integrand,
                              inner_cardioid, lame_sextic, real_count, sample_data)

ELL, CARD, G3 = ModelSpec("ellipse"), ModelSpec("cardioid"), ModelSpec("gamma3")


def test_model_parsing():
    assert ModelSpec.parse("rnc:3") == ModelSpec("rnc", (3,))
    assert ModelSpec.parse("matrix:3,4,1").ed_degree == 3
    assert ModelSpec.parse("tensor:2,2,2").ed_degree == 6
    assert ModelSpec.parse("ellipse").ambient == 2
    with pytest.raises(StructuralError):
        ModelSpec.parse("torus")
    with pytest.raises(DomainError):
        ModelSpec.parse("matrix:4,3,1")


def test_real_count_examples():
    assert real_count(ELL, (0.01, 0.013)) == 4
    assert real_count(ELL, (5.0, 5.0)) == 2
    assert real_count(CARD, (3.0, 2.0)) == 3
    assert real_count(CARD, (-0.2, 1 / 7)) == 1
    assert real_count(ModelSpec("matrix", (3, 5, 2)), [0.0] * 15) == 3
    with pytest.raises(StructuralError):
        real_count(ELL, (1.0, 2.0, 3.0))


def test_symmetric_data_is_special():
    assert lame_sextic(0, 0) < 0
    with pytest.raises(RetrySignal):
        real_count(ELL, (0.0, 0.0))


@pytest.mark.parametrize("model", [ELL, CARD, G3])
def test_fast_path_agrees_with_solver(model):
    for i in range(40):
        u = sample_data(model, 3, i)
        assert real_count(model, u) == real_count(model, u, method="solver")


def test_fast_path_agrees_with_fixtures():
    bad = 0
    for i in range(10000):
        u = sample_data(ELL, 11, i)
        expect = 4 if lame_sextic(*u) < 0 else 2
        bad += real_count(ELL, u) != expect
        u = sample_data(CARD, 12, i)
        expect = 1 if inner_cardioid(*u) < 0 else 3
        bad += real_count(CARD, u) != expect
    assert bad == 0


def test_rnc_real_count_range():
    for n in (2, 3, 4, 5):
        m = ModelSpec("rnc", (n,))
        for i in range(200):
            c = real_count(m, sample_data(m, 0, i))
            assert c % 2 == n % 2 and 1 <= c <= n


@pytest.mark.parametrize("model_text", ["ellipse", "cardioid", "gamma3", "rnc:3", "rnc:4"])
def test_histogram_parity_and_range(model_text):
    m = ModelSpec.parse(model_text)
    est = aed_estimate(m, 3000, seed=2)
    assert sum(est.histogram.values()) == 3000
    for k in est.histogram:
        assert 1 <= k <= m.ed_degree
        assert k % 2 == m.ed_degree % 2
    assert est.retries <= 30


def test_matrix_model_is_constant():
    est = aed_estimate(ModelSpec("matrix", (3, 4, 2)), 500)
    assert est.mean == 3 and est.stderr == 0


def test_rnc2_is_two():
    # a conic in this model: every Gaussian data point sees exactly 2 real critical points
    est = aed_estimate(ModelSpec("rnc", (2,)), 1000)
    assert est.mean == 2


def test_determinism_across_workers():
    a = aed_estimate(ELL, 9000, seed=5, workers=1).to_json()
    b = aed_estimate(ELL, 9000, seed=5, workers=3).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    c = aed_estimate(ELL, 9000, seed=6).to_json()
    assert c != a


def test_sample_count_validation():
    with pytest.raises(DomainError):
        aed_estimate(ELL, 10)


def test_integrand_at_origin():
    j, e = ellipse_integrand(0.0, 0.0)
    assert j == pytest.approx(32.0)
    assert e == pytest.approx(-0.5)


def test_quadrature():
    q = aed_quadrature_ellipse()
    assert abs(q - 3.04658) <= 1e-3
    assert abs(aed_quadrature_ellipse(512) - q) <= 1e-8
    with pytest.raises(DomainError):
        aed_quadrature_ellipse(32)


def test_monte_carlo_agrees_with_quadrature():
    est = aed_estimate(ELL, 20000, seed=9)
    assert abs(est.mean - aed_quadrature_ellipse()) <= 4 * est.stderr


def test_gaussian_draws():
    xs = np.array([sample_data(ELL, 1, i) for i in range(20000)]).ravel()
    assert abs(xs.mean()) < 0.03
    assert abs(xs.std() - 1) < 0.03
    assert sample_data(ELL, 1, 7) == sample_data(ELL, 1, 7)
    assert sample_data(ELL, 1, 7) != sample_data(ELL, 1, 7, attempt=1)
    assert all(math.isfinite(x) for x in xs)
