"""The symmetry-reduced 3 x 8 linear program for q_k and cs_k.

Invariant quartics form a three-dimensional space, so an identity
p = sum lambda_ij s_ij holds as polynomials iff it holds at three points
whose coefficient matrix has rank three. Everything here is exact.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from exact import exact_rank, format_rational, format_vector, mat_vec, to_fraction, vec_mat
from exceptions import (CertificateInvalidError, ConstructionMismatchError, RankDeficientError,
                        UnboundedProblemError)
from invariant_decomposition import LAMBDA_ORDER, lambda_labels, s_values
from invariant_forms import MatrixPoint, cs_eval_clifford, q_eval_clifford
from rational_simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, check_outcome, solve_standard_form

logger = logging.getLogger(__name__)

DEFAULT_FARKAS_ROW = (252, 3, -2)
K16_LAMBDA = (0, 0, 0, 0, Fraction(64, 15), 0, 0, Fraction(16, 15))
FORMS = ('q', 'cs')
MAX_RANDOM_POINTS = 50


@dataclass(frozen=True, eq=False)
class TestPointSet:
    __test__ = False

    X1: MatrixPoint
    X2: MatrixPoint
    X3: MatrixPoint
    extra: Tuple[MatrixPoint, ...] = ()

    @property
    def points(self) -> List[MatrixPoint]:
        return [self.X1, self.X2, self.X3, *self.extra]


def fixed_test_points(k: int) -> TestPointSet:
    """X_1 = e_11, X_2 = stacked 8x8 identities, X_3 = I_16, padded to k columns.

    Below k = 16 the identities are truncated to min(8, k) and min(16, k) columns.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    X1 = np.zeros((16, k), dtype=int)
    X1[0, 0] = 1
    X2 = np.zeros((16, k), dtype=int)
    for p in range(min(8, k)):
        X2[p, p] = 1
        X2[8 + p, p] = 1
    X3 = np.zeros((16, k), dtype=int)
    for p in range(min(16, k)):
        X3[p, p] = 1
    return TestPointSet(MatrixPoint(X1), MatrixPoint(X2), MatrixPoint(X3))


def select_test_points(k: int, rng: Optional[np.random.Generator] = None) -> TestPointSet:
    """Three points of full rank, topped up with random points when the fixed ones fall short."""
    base = fixed_test_points(k)
    kept = []
    for X in base.points:
        if exact_rank([s_values(P) for P in kept + [X]]) > len(kept):
            kept.append(X)
    if len(kept) == 3:
        return TestPointSet(*kept)
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    logger.warning(f"fixed test points have rank {len(kept)} at k={k}; adding random points")
    for _ in range(MAX_RANDOM_POINTS):
        X = MatrixPoint.random(k, rng)
        if exact_rank([s_values(P) for P in kept + [X]]) > len(kept):
            kept.append(X)
        if len(kept) == 3:
            return TestPointSet(*kept)
    raise RankDeficientError(f"no rank-3 set of test points found for k={k}")


@dataclass(frozen=True, eq=False)
class ConeProblem:
    k: int
    form: str
    A: Tuple[Tuple[Fraction, ...], ...]
    b: Tuple[Fraction, ...]
    points: TestPointSet
    rank: int = field(default=0)

    def entry(self, row: int, pair: Tuple[int, int]) -> Fraction:
        return self.A[row][LAMBDA_ORDER.index(pair)]


def _form_value(form: str, X: MatrixPoint) -> Fraction:
    if form == 'q':
        return q_eval_clifford(X)
    return cs_eval_clifford(X)


def coeff_matrix(k: int, form: str = 'q', points: Optional[TestPointSet] = None) -> ConeProblem:
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    if points is None:
        points = fixed_test_points(k) if k >= 16 else select_test_points(k)
    rows = [s_values(X) for X in points.points]
    b = tuple(_form_value(form, X) for X in points.points)
    rank = exact_rank(rows)
    logger.info(f"coefficient matrix for {form}_{k}: {len(rows)}x8, rank {rank}")
    return ConeProblem(k, form, tuple(tuple(r) for r in rows), b, points, rank)


@dataclass(frozen=True)
class FarkasCertificate:
    row: Tuple[Fraction, ...]
    product_row: Tuple[Fraction, ...]
    product_rhs: Fraction

    @property
    def valid(self) -> bool:
        return all(v >= 0 for v in self.product_row) and self.product_rhs < 0

    def normalized(self) -> 'FarkasCertificate':
        """Scaled so that the right-hand side is -1."""
        scale = -1 / self.product_rhs
        return FarkasCertificate(tuple(v * scale for v in self.row),
                                 tuple(v * scale for v in self.product_row), Fraction(-1))


def farkas_check(problem: ConeProblem, row: Sequence) -> FarkasCertificate:
    row = tuple(to_fraction(v) for v in row)
    if len(row) != len(problem.A):
        raise ValueError(f"Farkas row needs {len(problem.A)} entries, got {len(row)}")
    product_row = tuple(vec_mat(row, problem.A))
    product_rhs = sum((y * b for y, b in zip(row, problem.b)), Fraction(0))
    return FarkasCertificate(row, product_row, product_rhs)


def farkas_verify(k: int = 17, row: Sequence = DEFAULT_FARKAS_ROW,
                  problem: Optional[ConeProblem] = None) -> FarkasCertificate:
    problem = problem or coeff_matrix(k, 'q')
    cert = farkas_check(problem, row)
    if not cert.valid:
        negative = [LAMBDA_ORDER[j] for j, v in enumerate(cert.product_row) if v < 0]
        logger.error(f"Farkas row {format_vector(cert.row)} rejected for k={problem.k}: "
                     f"negative at {negative}, rhs {format_rational(cert.product_rhs)}")
        raise CertificateInvalidError(
            f"row {format_vector(cert.row)} is not a Farkas certificate for k={problem.k} "
            f"(negative entries at {negative}, rhs {format_rational(cert.product_rhs)})")
    return cert


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    lam: Optional[Tuple[Fraction, ...]] = None
    farkas: Optional[FarkasCertificate] = None


def feasibility_solve(problem: ConeProblem) -> FeasibilityResult:
    """Either lambda >= 0 with A lambda = b, or a Farkas row."""
    if problem.rank < len(problem.A):
        raise RankDeficientError(f"coefficient matrix for k={problem.k} has rank {problem.rank}")
    outcome = solve_standard_form(problem.A, problem.b)
    if not check_outcome(problem.A, problem.b, outcome):
        raise ConstructionMismatchError(f"simplex returned an unverifiable {outcome.status} outcome")
    if outcome.status == INFEASIBLE:
        cert = farkas_check(problem, outcome.farkas_row).normalized()
        logger.info(f"{problem.form}_{problem.k} is not SOS; Farkas row {format_vector(cert.row)}")
        return FeasibilityResult(False, farkas=cert)
    logger.info(f"{problem.form}_{problem.k} is SOS; lambda {format_vector(outcome.x)}")
    return FeasibilityResult(True, lam=tuple(outcome.x))


def verify_decomposition(k: int, lam: Sequence, num_points: int = 100,
                         rng: Optional[np.random.Generator] = None, bound: int = 3) -> bool:
    """A lambda = b at the test points, then q_k = sum lambda_ij s_ij at random points."""
    lam = [to_fraction(v) for v in lam]
    if len(lam) != len(LAMBDA_ORDER) or any(v < 0 for v in lam):
        raise ValueError("lambda must be a nonnegative 8-vector")
    problem = coeff_matrix(k, 'q')
    if mat_vec(problem.A, lam) != list(problem.b):
        logger.info(f"lambda fails the {len(problem.b)} test-point equations for k={k}")
        return False
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    for n in range(num_points):
        X = MatrixPoint.random(k, rng, bound)
        combo = sum((l * s for l, s in zip(lam, s_values(X))), Fraction(0))
        if combo != q_eval_clifford(X):
            logger.info(f"decomposition fails at random point {n} for k={k}")
            return False
    return True


def _sos_min_problem(k: int) -> Tuple[List[List[Fraction]], List[Fraction]]:
    problem = coeff_matrix(k, 'cs')
    A, b = [], []
    for row, X, rhs in zip(problem.A, problem.points.points, problem.b):
        t = X.frobenius_sq()
        A.append(list(row) + [t * t, -t * t])
        b.append(rhs)
    return A, b


def sos_min_invariant(k: int) -> Fraction:
    """Largest gamma with cs_k - gamma ||X||^4 in the cone of the s_ij."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    A, b = _sos_min_problem(k)
    # variables: lambda (8), gamma+, gamma-; minimize -gamma
    cost = [0] * len(LAMBDA_ORDER) + [-1, 1]
    outcome = solve_standard_form(A, b, cost)
    if outcome.status == UNBOUNDED:
        raise UnboundedProblemError(f"sos_min LP is unbounded for k={k}")
    if outcome.status != OPTIMAL:
        raise ConstructionMismatchError(f"sos_min LP is {outcome.status} for k={k}")
    gamma = -outcome.objective
    logger.info(f"sos_min(cs_{k}) = {format_rational(gamma)}")
    return gamma


def gap_invariant(k: int) -> Fraction:
    """(p_max - p_min^sos) / (p_max - p_min) with p_max = 1/4, p_min = 0."""
    p_max = Fraction(1, 4)
    return (p_max - sos_min_invariant(k)) / p_max


def sos_min_closed_form(k: int) -> Fraction:
    return Fraction(-2 * (k - 1), 8 + 7 * k)


def gap_closed_form(k: int) -> Fraction:
    return Fraction(15 * k, 8 + 7 * k)


def q_is_sos_by_shift(k: int) -> bool:
    """q_k = cs_k + 1/4 ||X||^4 is SOS iff sos_min(cs_k) >= -1/4."""
    return sos_min_invariant(k) >= Fraction(-1, 4)


def certificate_document(k: int, num_points: int = 10,
                         rng: Optional[np.random.Generator] = None) -> Dict[str, Any]:
    problem = coeff_matrix(k, 'q')
    result = feasibility_solve(problem)
    if result.feasible:
        if not verify_decomposition(k, result.lam, num_points=num_points, rng=rng):
            raise ConstructionMismatchError(f"lambda for k={k} fails at random points")
        certificate = {'lambda': format_vector(result.lam)}
    else:
        cert = result.farkas
        certificate = {
            'farkas_row': format_vector(cert.row),
            'product_row': format_vector(cert.product_row),
            'product_rhs': format_rational(cert.product_rhs),
        }
    return {
        'k': k,
        'lambda_order': [list(pair) for pair in LAMBDA_ORDER],
        'lambda_labels': lambda_labels(),
        'A': [format_vector(row) for row in problem.A],
        'b': format_vector(problem.b),
        'verdict': 'sos' if result.feasible else 'not_sos',
        'certificate': certificate,
    }


def write_certificate(document: Dict[str, Any], output_dir: Optional[str] = None) -> Path:
    out = Path(output_dir or Config.OUTPUT_DIR)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"certificate_k{document['k']}.json"
    with open(path, 'w') as f:
        json.dump(document, f, indent=2)
    logger.info(f"certificate written to {path}")
    return path
