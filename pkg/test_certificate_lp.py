import dataclasses
import json
from fractions import Fraction as F

import pytest

import certificate_lp
from certificate_lp import (DEFAULT_FARKAS_ROW, K16_LAMBDA, certificate_document, coeff_matrix,
                            farkas_check, farkas_verify, feasibility_solve, gap_closed_form, gap_invariant,
                            fixed_test_points, q_is_sos_by_shift, select_test_points, sos_min_closed_form,
                            sos_min_invariant, verify_decomposition, write_certificate)
from exact import exact_rank, parse_rational
from exceptions import CertificateInvalidError, ConstructionMismatchError, UnboundedProblemError
from invariant_decomposition import s_values
from rational_simplex import INFEASIBLE, UNBOUNDED, LpOutcome

K17_ROWS = [
    [F(1, 272), F(1, 272), F(14, 272), F(1, 17), F(1, 17), F(14, 17), 0, 0],
    [F(16, 17), F(16, 17), 0, F(18, 17), F(18, 17), 140, 56, 56],
    [F(16, 17), 0, 0, F(1, 17), 9, 126, 36, 84],
]
K16_ROWS = [
    [F(1, 256), F(1, 256), F(14, 256), F(15, 256), F(15, 256), F(210, 256), 0, 0],
    [1, 1, 0, 1, 1, 140, 56, 56],
    [1, 0, 0, 0, 9, 126, 36, 84],
]
B = [F(1, 4), 64, 128]


def test_coefficient_matrix_k17():
    problem = coeff_matrix(17)
    assert [list(row) for row in problem.A] == K17_ROWS
    assert list(problem.b) == B
    assert problem.rank == 3
    assert problem.entry(1, (4, 1)) == 140


def test_coefficient_matrix_k16():
    problem = coeff_matrix(16)
    assert [list(row) for row in problem.A] == K16_ROWS
    assert list(problem.b) == B


def test_cs_right_hand_side():
    assert list(coeff_matrix(17, 'cs').b) == [0, 0, 64]
    with pytest.raises(ValueError):
        coeff_matrix(17, 'p')


def test_farkas_certificate_k17():
    cert = farkas_verify(17)
    assert cert.row == tuple(F(v) for v in DEFAULT_FARKAS_ROW)
    assert cert.product_row == (F(127, 68), F(15, 4), F(441, 34), F(304, 17), 0, F(6384, 17), 96, 0)
    assert cert.product_rhs == -1
    assert cert.valid


def test_invalid_farkas_rows():
    with pytest.raises(CertificateInvalidError):
        farkas_verify(17, (1, 0, 0))
    with pytest.raises(CertificateInvalidError):
        farkas_verify(16)
    with pytest.raises(ValueError):
        farkas_check(coeff_matrix(17), (1, 2))


def test_normalized_certificate():
    cert = farkas_check(coeff_matrix(17), (504, 6, -4))
    assert cert.product_rhs == -2
    assert cert.normalized() == farkas_verify(17)


def test_known_lambda_k16():
    problem = coeff_matrix(16)
    for row, rhs in zip(problem.A, problem.b):
        assert sum(a * l for a, l in zip(row, K16_LAMBDA)) == rhs
    assert verify_decomposition(16, K16_LAMBDA, num_points=100)


def test_wrong_lambda_rejected():
    assert not verify_decomposition(16, [0] * 8, num_points=5)
    perturbed = list(K16_LAMBDA)
    perturbed[7] += F(1, 1000)
    assert not verify_decomposition(16, perturbed, num_points=5)
    with pytest.raises(ValueError):
        verify_decomposition(16, [-1] + [0] * 7)


@pytest.mark.parametrize('k', range(16, 25))
def test_feasibility_threshold(k):
    result = feasibility_solve(coeff_matrix(k))
    assert result.feasible == (k == 16)
    if result.feasible:
        assert all(v >= 0 for v in result.lam)
        assert verify_decomposition(k, result.lam, num_points=10)
    else:
        assert result.farkas.valid
        assert result.farkas.product_rhs == -1


def test_truncated_points_below_16():
    points = fixed_test_points(5)
    assert points.X2.k == 5
    selected = select_test_points(5)
    assert len(selected.points) == 3
    assert exact_rank([s_values(X) for X in selected.points]) == 3
    with pytest.raises(ValueError):
        fixed_test_points(1)


def test_sos_min_matches_closed_form():
    previous = None
    for k in range(2, 25):
        gamma = sos_min_invariant(k)
        assert gamma == sos_min_closed_form(k)
        assert (1 - 4 * gamma > 2) == (k >= 17)
        if previous is not None:
            assert gamma <= previous
        previous = gamma
    assert sos_min_invariant(2) == F(-1, 11)
    assert gap_invariant(17) == gap_closed_form(17) == F(255, 127)
    assert gap_invariant(16) == 2


def test_shift_criterion_agrees_with_feasibility():
    for k in range(16, 25):
        assert q_is_sos_by_shift(k) == feasibility_solve(coeff_matrix(k)).feasible


def test_certificate_documents(tmp_path):
    sos = certificate_document(16, num_points=3)
    assert sos['verdict'] == 'sos'
    assert len(sos['certificate']['lambda']) == 8

    not_sos = certificate_document(17, num_points=3)
    assert not_sos['verdict'] == 'not_sos'
    assert not_sos['certificate']['product_rhs'] == '-1/1'
    assert all(parse_rational(v) >= 0 for v in not_sos['certificate']['product_row'])
    assert not_sos['b'] == ['1/4', '64/1', '128/1']

    path = write_certificate(not_sos, str(tmp_path))
    assert path.name == 'certificate_k17.json'
    assert json.loads(path.read_text()) == not_sos


def test_zero_right_hand_side_gives_zero_lambda():
    problem = dataclasses.replace(coeff_matrix(17, 'q'), b=(F(0), F(0), F(0)))
    result = feasibility_solve(problem)
    assert result.feasible
    assert result.lam == (0,) * 8
    assert result.farkas is None


@pytest.mark.parametrize('status, error', [
    (UNBOUNDED, UnboundedProblemError),
    (INFEASIBLE, ConstructionMismatchError),
])
def test_sos_min_rejects_unexpected_lp_outcome(monkeypatch, status, error):
    monkeypatch.setattr(certificate_lp, 'solve_standard_form', lambda A, b, c=None: LpOutcome(status))
    with pytest.raises(error):
        sos_min_invariant(3)


def test_sos_min_rejects_small_k():
    with pytest.raises(ValueError):
        sos_min_invariant(1)
