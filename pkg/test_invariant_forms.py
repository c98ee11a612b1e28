from fractions import Fraction

import numpy as np
import pytest

from certificate_lp import fixed_test_points
from clifford_system import build_S
from exact import frobenius_sq, random_rational_matrix
from invariant_forms import (MatrixPoint, cs_eval_clifford, cs_eval_octonion, gradient, hessian_apply,
                             hessian_matrix, q_eval, q_eval_clifford, q_eval_matrix, q_expressions,
                             rational_orthogonal, rational_spin9_element, spin9_generator)
from octonion_core import Octonion, OctonionVector, random_octonion


def test_values_at_fixed_points():
    pts = fixed_test_points(17)
    assert q_eval(pts.X1) == Fraction(1, 4)
    assert q_eval(pts.X2) == 64
    assert q_eval(pts.X3) == 128
    assert cs_eval_octonion(pts.X2) == 0
    assert cs_eval_octonion(pts.X3) == 64
    assert q_eval_matrix(pts.X1) == Fraction(1, 4)


def test_identification_of_columns(rng):
    x = OctonionVector(tuple(random_octonion(rng) for _ in range(3)))
    y = OctonionVector(tuple(random_octonion(rng) for _ in range(3)))
    X = MatrixPoint.from_octonion_vectors(x, y)
    assert X.k == 3
    assert X.x == x and X.y == y
    assert X.frobenius_sq() == x.norm_sq() + y.norm_sq()


def test_frobenius_norm_of_rational_point():
    entries = np.zeros((16, 2), dtype=object)
    entries[0, 0] = Fraction(1, 2)
    entries[9, 0] = Fraction(-2, 3)
    entries[15, 1] = 3
    X = MatrixPoint(entries)
    assert X.frobenius_sq() == Fraction(1, 4) + Fraction(4, 9) + 9
    assert X.frobenius_sq() == frobenius_sq(X.entries)


def test_cs_vanishes_without_second_vector(rng):
    X = random_rational_matrix(rng, (16, 4))
    X[8:, :] = 0
    assert cs_eval_octonion(X) == 0
    assert cs_eval_clifford(X) == 0


def test_single_column_point(rng):
    x = random_octonion(rng)
    X = MatrixPoint.from_octonion_vectors(OctonionVector((x,)), OctonionVector((Octonion.zero(),)))
    assert q_eval_matrix(X) == x.norm_sq() ** 2 / 4


@pytest.mark.parametrize('k', [2, 3, 17])
def test_three_expressions_agree(rng, k):
    for _ in range(100):
        X = MatrixPoint.random(k, rng, bound=5)
        values = q_expressions(X)
        assert values['octonion'] == values['clifford_sum'] == values['projector']


def test_cs_bounds(rng):
    for _ in range(50):
        X = MatrixPoint.random(4, rng)
        t = X.frobenius_sq()
        cs = cs_eval_octonion(X)
        assert 0 <= cs <= t * t / 4
        assert cs == cs_eval_clifford(X)


def test_spin_generator_from_trivial_point():
    g = spin9_generator(Octonion.zero(), 1)
    assert np.array_equal(g.matrix, build_S(8).entries)
    assert g.is_orthogonal()


def test_spin_generator_rejects_off_sphere_point():
    with pytest.raises(ValueError):
        spin9_generator(Octonion.unit(1), 1)


def test_stereographic_points_are_on_sphere(rng):
    for _ in range(10):
        g = rational_spin9_element(rng)
        assert g.u.norm_sq() + g.v * g.v == 1
        assert g.is_orthogonal()


def test_rational_orthogonal(rng):
    for k in (1, 2, 5, 17):
        h = rational_orthogonal(k, rng)
        assert np.all(h @ h.T == np.eye(k, dtype=int))


def test_invariance_under_spin_and_orthogonal(rng):
    k = 17
    for _ in range(50):
        X = MatrixPoint.random(k, rng, bound=4)
        g = rational_spin9_element(rng, bound=3).matrix
        h = rational_orthogonal(k, rng, bound=3)
        assert q_eval_clifford(X.transform(g, h)) == q_eval_clifford(X)


def test_invariance_under_products_of_generators(rng):
    X = MatrixPoint.random(3, rng)
    g = np.eye(16, dtype=int).astype(object)
    for _ in range(4):
        g = g @ rational_spin9_element(rng, bound=3).matrix
    assert q_eval(X.transform(g)) == q_eval(X)


def test_euler_identity_and_homogeneity(rng):
    for k in (2, 17):
        X = MatrixPoint.random(k, rng, bound=5)
        G = gradient(X)
        assert np.sum(G * X.entries) == 4 * q_eval_clifford(X)
        assert np.array_equal(gradient(X.scale(2)), 8 * G)
    assert not np.any(gradient(MatrixPoint.zeros(3)))


def test_hessian_apply_is_self_adjoint(rng):
    X, Y, Z = (MatrixPoint.random(3, rng).entries for _ in range(3))
    assert np.sum(hessian_apply(X, Y) * Z) == np.sum(Y * hessian_apply(X, Z))
    assert np.array_equal(hessian_apply(2 * X, Y), 4 * hessian_apply(X, Y))


def test_hessian_matrix_matches_apply(rng):
    k = 4
    X = rng.standard_normal((16, k))
    Y = rng.standard_normal((16, k))
    H = hessian_matrix(X)
    assert np.array_equal(H, H.T)
    assert np.allclose(H @ Y.flatten(order='F'), hessian_apply(X, Y).flatten(order='F'))


def test_matrix_point_validation():
    with pytest.raises(ValueError):
        MatrixPoint(np.zeros((8, 2), dtype=int))
    with pytest.raises(TypeError):
        MatrixPoint(np.zeros((16, 2)))
