"""The quartic forms cs_k and q_k on O^k x O^k, exact group elements and derivatives.

A point (x, y) is stored as a 16 x k matrix X whose column j stacks [x_j]
over [y_j]. In that picture

    q_k(X) = 1/2 tr(XX^T)^2 - 1/4 sum_i tr(X^T S_i X)^2
           = 1/2 tr(XX^T)^2 - 4 ||P_V1(XX^T)||^2

and cs_k = q_k - 1/4 tr(XX^T)^2.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

import numpy as np

from clifford_system import NUM_GENERATORS, SIZE, build_S, project_V
from exact import (frobenius_sq, integerize, random_rational, random_rational_matrix, to_fraction,
                   to_fraction_array)
from exceptions import ConstructionMismatchError
from octonion_core import (DEFAULT_TABLE, DIM, Octonion, OctonionTable, OctonionVector,
                           right_mult_matrix)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixPoint:
    entries: np.ndarray

    def __post_init__(self):
        arr = to_fraction_array(self.entries)
        if arr.ndim != 2 or arr.shape[0] != SIZE or arr.shape[1] < 1:
            raise ValueError(f"a matrix point is 16 x k with k >= 1, got shape {arr.shape}")
        object.__setattr__(self, 'entries', arr)

    @classmethod
    def zeros(cls, k: int) -> 'MatrixPoint':
        return cls(np.zeros((SIZE, k), dtype=int))

    @classmethod
    def random(cls, k: int, rng: np.random.Generator, bound: Optional[int] = None) -> 'MatrixPoint':
        return cls(random_rational_matrix(rng, (SIZE, k), bound))

    @classmethod
    def from_octonion_vectors(cls, x: OctonionVector, y: OctonionVector) -> 'MatrixPoint':
        if x.k != y.k:
            raise ValueError(f"length mismatch: {x.k} vs {y.k}")
        cols = [list(a.coords) + list(b.coords) for a, b in zip(x.entries, y.entries)]
        return cls(np.array(cols, dtype=object).T)

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    @property
    def x(self) -> OctonionVector:
        return OctonionVector(tuple(Octonion(tuple(self.entries[:DIM, j])) for j in range(self.k)))

    @property
    def y(self) -> OctonionVector:
        return OctonionVector(tuple(Octonion(tuple(self.entries[DIM:, j])) for j in range(self.k)))

    def frobenius_sq(self) -> Fraction:
        return frobenius_sq(self.entries)

    def __add__(self, other: 'MatrixPoint') -> 'MatrixPoint':
        return MatrixPoint(self.entries + other.entries)

    def scale(self, t) -> 'MatrixPoint':
        t = to_fraction(t)
        return MatrixPoint(self.entries * t)

    def transform(self, g: np.ndarray, h: Optional[np.ndarray] = None) -> 'MatrixPoint':
        """g X h^T."""
        out = g @ self.entries
        if h is not None:
            out = out @ h.T
        return MatrixPoint(out)


PointLike = Union[MatrixPoint, np.ndarray]


def _entries(X: PointLike) -> np.ndarray:
    return X.entries if isinstance(X, MatrixPoint) else np.asarray(X)


def _as_point(X: PointLike) -> MatrixPoint:
    return X if isinstance(X, MatrixPoint) else MatrixPoint(X)


def cs_eval_octonion(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Fraction:
    """||x||^2 ||y||^2 - |(x, y)|^2."""
    X = _as_point(X)
    x, y = X.x, X.y
    return x.norm_sq() * y.norm_sq() - x.hermitian_product(y, table).norm_sq()


def q_eval(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Fraction:
    X = _as_point(X)
    t = X.frobenius_sq()
    return cs_eval_octonion(X, table) + t * t / 4


def _gram_invariants(X: PointLike, table: OctonionTable):
    """(tr G, [<S_i, G>], D^4) for G the integer-scaled XX^T."""
    Y, den = integerize(_as_point(X).entries)
    G = Y @ Y.T
    t = sum(G[p, p] for p in range(SIZE))
    c = [build_S(i, table).trace_inner(G) for i in range(NUM_GENERATORS)]
    return int(t), [int(ci) for ci in c], den ** 4


def cs_eval_clifford(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Fraction:
    t, c, scale = _gram_invariants(X, table)
    return Fraction(t * t - sum(ci * ci for ci in c), 4 * scale)


def q_eval_clifford(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Fraction:
    t, c, scale = _gram_invariants(X, table)
    return Fraction(2 * t * t - sum(ci * ci for ci in c), 4 * scale)


def q_eval_projector(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Fraction:
    X = _as_point(X)
    G = X.entries @ X.entries.T
    t = sum((G[p, p] for p in range(SIZE)), Fraction(0))
    P = project_V(1, G, table)
    return t * t / 2 - 4 * sum((v * v for v in P.flat), Fraction(0))


def q_expressions(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Dict[str, Fraction]:
    return {
        'octonion': q_eval(X, table),
        'clifford_sum': q_eval_clifford(X, table),
        'projector': q_eval_projector(X, table),
    }


def q_eval_matrix(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> Fraction:
    """q_k through the S_i sum, checked against the projector form and the definition."""
    values = q_expressions(X, table)
    if len(set(values.values())) != 1:
        logger.error(f"q_k expressions disagree: {values}")
        raise ConstructionMismatchError(f"q_k expressions disagree: {values}")
    return values['clifford_sum']


@dataclass(frozen=True, eq=False)
class SpinGenerator:
    u: Octonion
    v: Fraction
    matrix: np.ndarray

    def is_orthogonal(self) -> bool:
        return bool(np.all(self.matrix @ self.matrix.T == np.eye(SIZE, dtype=int)))


def spin9_generator(u: Octonion, v, table: OctonionTable = DEFAULT_TABLE) -> SpinGenerator:
    """[[vI, R_u], [R_conj(u), -vI]] for |u|^2 + v^2 = 1."""
    v = to_fraction(v)
    if u.norm_sq() + v * v != 1:
        raise ValueError(f"|u|^2 + v^2 must equal 1, got {u.norm_sq() + v * v}")
    R = right_mult_matrix(u, table)
    matrix = np.zeros((SIZE, SIZE), dtype=object)
    for p in range(DIM):
        matrix[p, p] = v
        matrix[DIM + p, DIM + p] = -v
    matrix[:DIM, DIM:] = R
    matrix[DIM:, :DIM] = R.T
    return SpinGenerator(u, v, to_fraction_array(matrix))


def rational_spin9_element(rng: np.random.Generator, bound: Optional[int] = None,
                           table: OctonionTable = DEFAULT_TABLE) -> SpinGenerator:
    """Generator from a rational point of S^8, via inverse stereographic projection."""
    m = [random_rational(rng, bound) for _ in range(DIM)]
    s = sum((a * a for a in m), Fraction(0))
    u = Octonion(tuple(2 * a / (1 + s) for a in m))
    v = (1 - s) / (1 + s)
    return spin9_generator(u, v, table)


def rational_orthogonal(k: int, rng: np.random.Generator, bound: Optional[int] = None) -> np.ndarray:
    """Signed permutation followed by k rational Givens rotations."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    h = np.zeros((k, k), dtype=object)
    for row, col in enumerate(rng.permutation(k)):
        h[row, int(col)] = Fraction(int(rng.choice([-1, 1])))
    if k == 1:
        return h
    for _ in range(k):
        a, b = (int(i) for i in rng.choice(k, size=2, replace=False))
        t = random_rational(rng, bound)
        c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        row_a, row_b = h[a].copy(), h[b].copy()
        h[a] = c * row_a - s * row_b
        h[b] = s * row_a + c * row_b
    return h


def _clifford_terms(X: np.ndarray, table: OctonionTable):
    SX = [build_S(i, table).apply(X) for i in range(NUM_GENERATORS)]
    c = [np.sum(X * S) for S in SX]
    return SX, c


def q_eval_numeric(X: PointLike, table: OctonionTable = DEFAULT_TABLE):
    """q_k in the dtype of X; the floating view used by finite differences."""
    X = _entries(X)
    t = np.sum(X * X)
    _, c = _clifford_terms(X, table)
    return t * t / 2 - sum(ci * ci for ci in c) / 4


def gradient(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    """2 tr(XX^T) X - sum_i tr(X^T S_i X) S_i X, in the dtype of X."""
    X = _entries(X)
    t = np.sum(X * X)
    SX, c = _clifford_terms(X, table)
    out = 2 * t * X
    for ci, S in zip(c, SX):
        out = out - ci * S
    return out


def hessian_apply(X: PointLike, Y: PointLike, table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    X, Y = _entries(X), _entries(Y)
    t = np.sum(X * X)
    SX, c = _clifford_terms(X, table)
    out = 4 * np.sum(X * Y) * X + 2 * t * Y
    for i in range(NUM_GENERATORS):
        out = out - 2 * np.sum(SX[i] * Y) * SX[i] - c[i] * build_S(i, table).apply(Y)
    return out


def hessian_matrix(X: PointLike, table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    """Hessian on column-major vec(X); symmetric entry by entry."""
    X = _entries(X)
    if X.dtype == object:
        X = X.astype(float)
    k = X.shape[1]
    x = X.flatten(order='F')
    t = float(x @ x)
    H = 4 * np.outer(x, x) + 2 * t * np.eye(SIZE * k)
    eye_k = np.eye(k)
    for i in range(NUM_GENERATORS):
        S = build_S(i, table)
        v = S.apply(X).flatten(order='F')
        H -= 2 * np.outer(v, v)
        H -= float(np.sum(X * S.apply(X))) * np.kron(eye_k, S.entries.astype(float))
    return H
