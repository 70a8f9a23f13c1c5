import itertools
import json

import numpy as np
import pytest

from eddeg.errors import DomainError
from eddeg.formulas import ed_eigen_count
from eddeg.tensors import (Stream, TensorShape, aed_tensor, ed_segre, ed_segre_veronese,
                           gamma_constant, sample_ensemble, segre_generating_poly)
from eddeg.toric import ed_toric, simplex_product

COLUMN = {(2,) * k: v for k, v in zip(range(3, 11), [6, 24, 120, 720, 5040, 40320, 362880, 3628800])}
MIXED = {(2, 2, 3): 8, (2, 2, 4): 8, (2, 2, 5): 8, (2, 3, 3): 15, (2, 3, 4): 18, (2, 3, 5): 18,
         (3, 3, 3): 37, (3, 3, 4): 55, (3, 3, 5): 61}


def test_segre_table():
    for dims, v in {**COLUMN, **MIXED}.items():
        assert ed_segre(dims) == v


def test_matrices():
    for n in range(2, 7):
        for m in range(2, 7):
            assert ed_segre((n, m)) == min(n, m)


def test_segre_veronese():
    assert ed_segre_veronese(TensorShape((2, 3), (3, 2))) == 27
    for m in range(1, 6):
        for w in range(2, 6):
            assert ed_segre_veronese(TensorShape((m,), (w,))) == ed_eigen_count(m, w)


def test_one_dimensional_factor_is_a_point():
    assert ed_segre_veronese(TensorShape((1,), (4,))) == 1
    assert ed_segre((1, 3)) == ed_segre((3,)) == 1
    assert ed_segre((1, 2, 2)) == ed_segre((2, 2))


def test_weights_one_is_segre():
    for p in range(2, 5):
        for dims in itertools.product(range(2, 5), repeat=p):
            if p == 4 and max(dims) > 3:
                continue
            assert ed_segre_veronese(TensorShape(dims, (1,) * p)) == ed_segre(dims)


def test_permutation_symmetry():
    for dims in [(2, 3, 4), (2, 2, 3, 4), (3, 3, 4), (2, 4, 4)]:
        vals = {ed_segre(perm) for perm in itertools.permutations(dims)}
        assert len(vals) == 1


def test_stabilization():
    assert ed_segre((2, 2, 4)) == ed_segre((2, 2, 5)) == 8
    assert ed_segre((2, 3, 5)) == ed_segre((2, 3, 6))
    assert ed_segre((3, 3, 5)) == ed_segre((3, 3, 6))


def test_invariant_at_most_general():
    for dims in [(2, 2), (2, 3), (2, 2, 2), (3, 3), (2, 4)]:
        assert ed_segre(dims) <= ed_toric(simplex_product([d - 1 for d in dims]))
    assert (ed_segre((2, 2, 2)), ed_toric(simplex_product([1, 1, 1]))) == (6, 34)


def test_generating_poly_symmetric():
    g = segre_generating_poly(TensorShape((3, 3, 3)))
    for perm in itertools.permutations(range(3)):
        assert g.reorder(perm) == g


def test_ensemble_patterns():
    e = sample_ensemble((2, 2, 3), Stream(1, 0))
    A = e.A
    assert A.shape == (4, 4)
    assert A[2, 3] == 0 and A[3, 2] == 0
    assert np.allclose(A, A.T)
    assert len(set(np.diag(A))) == 1
    e = sample_ensemble((2, 2), Stream(1, 5))
    assert e.A[0, 0] == e.A[1, 1] and e.A[0, 1] == e.A[1, 0]
    for i in range(1000):
        A = sample_ensemble((3, 3, 3), Stream(7, i)).A
        for b in range(3):
            blk = A[2 * b:2 * b + 2, 2 * b:2 * b + 2]
            assert blk[0, 1] == 0 and blk[1, 0] == 0 and blk[0, 0] == blk[1, 1] == A[0, 0]


def test_gamma_constant_matrix_case():
    # (2,2): ED degree 2 = c * E|U0^2 - U12^2| and E|U0^2 - U12^2| = 4/pi
    assert gamma_constant((2, 2)) * 4 / np.pi == pytest.approx(2.0, rel=1e-12)


def test_aed_tensor_small_run():
    est = aed_tensor((2, 2), 100000, seed=1)
    assert abs(est.mean - 2.0) <= 5 * est.stderr + 1e-3
    est = aed_tensor((2, 2, 2), 100000, seed=1)
    assert est.mean <= 6 + 3 * est.stderr
    assert abs(est.mean - 4.287) <= 0.1


def test_aed_tensor_worker_determinism():
    a = aed_tensor((2, 3, 3), 70000, seed=4, workers=1)
    b = aed_tensor((2, 3, 3), 70000, seed=4, workers=3)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_rejects_bad_shapes():
    with pytest.raises(DomainError):
        TensorShape((0, 3))
    with pytest.raises(DomainError):
        aed_tensor((1, 3), 100)
    with pytest.raises(DomainError):
        aed_tensor(TensorShape((2, 3), (2, 1)), 100)
