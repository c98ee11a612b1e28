"""O(k)-side bases, the index set Lambda, and the invariant SOS generators s_ij.

s_ij(X) is the sum of tr(X^T E X F)^2 / (||E||^2 ||F||^2) over orthogonal
bases E of V_i and F of U_j. With G = X X^T and M = X^T S_J X:

    sum over F in U_0       ->  tr(M)^2 / k          (tr(M) = <S_J, G>)
    sum over F in U_0 + U_1 ->  ||M||^2 = tr(S_J G S_J^T G)   (S_J symmetric)
    sum over F in U_-1      ->  ||M||^2                        (S_J skew)

so every s_ij only needs the 16x16 Gram matrix.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from clifford_system import SIZE, v_basis
from exact import integerize

logger = logging.getLogger(__name__)

LAMBDA_ORDER: Tuple[Tuple[int, int], ...] = (
    (0, 0), (1, 0), (4, 0), (0, 1), (1, 1), (4, 1), (2, -1), (3, -1),
)


@dataclass(frozen=True)
class LambdaPair:
    i: int
    j: int

    def __post_init__(self):
        if (self.i, self.j) not in LAMBDA_ORDER:
            raise ValueError(f"({self.i}, {self.j}) is not in Lambda")

    @property
    def label(self) -> str:
        return f"s_{self.i},{self.j}"


LAMBDA: Tuple[LambdaPair, ...] = tuple(LambdaPair(i, j) for i, j in LAMBDA_ORDER)


@dataclass(frozen=True, eq=False)
class OkBasisElement:
    matrix: np.ndarray
    norm_sq: Fraction
    j: int


def _unit_pair(k: int, a: int, b: int, sign: int) -> np.ndarray:
    m = np.zeros((k, k), dtype=object)
    m[a, b] = 1
    m[b, a] = sign
    return m


@lru_cache(maxsize=None)
def u_basis(j: int, k: int) -> Tuple[OkBasisElement, ...]:
    """Orthogonal bases with rational norms for U_0, U_1 and U_-1."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if j == 0:
        return (OkBasisElement(np.eye(k, dtype=int).astype(object), Fraction(k), 0),)
    if j == -1:
        return tuple(OkBasisElement(_unit_pair(k, a, b, -1), Fraction(2), -1)
                     for a in range(k) for b in range(a + 1, k))
    if j == 1:
        off = [OkBasisElement(_unit_pair(k, a, b, 1), Fraction(2), 1)
               for a in range(k) for b in range(a + 1, k)]
        diag = []
        for m in range(1, k):
            g = np.zeros((k, k), dtype=object)
            for a in range(m):
                g[a, a] = 1
            g[m, m] = -m
            diag.append(OkBasisElement(g, Fraction(m * (m + 1)), 1))
        return tuple(off + diag)
    raise ValueError(f"O(k) component must be -1, 0 or 1, got {j}")


def _check_point(X: np.ndarray) -> int:
    if X.ndim != 2 or X.shape[0] != SIZE:
        raise ValueError(f"expected a 16 x k matrix, got shape {X.shape}")
    if X.shape[1] < 2:
        raise ValueError(f"the O(k) decomposition needs k >= 2, got k={X.shape[1]}")
    return X.shape[1]


@lru_cache(maxsize=None)
def _level_tables(level: int) -> Tuple[np.ndarray, np.ndarray]:
    basis = v_basis(level)
    return basis.perms, basis.signs


def _level_sums(G: np.ndarray, level: int) -> Tuple[int, int]:
    """(sum_J <S_J, G>^2, sum_J tr(S_J G S_J^T G)) over |J| = level."""
    perms, signs = _level_tables(level)
    rows = np.arange(SIZE)
    traces = np.sum(G[rows, perms] * signs, axis=1)
    conj = G[perms[:, :, None], perms[:, None, :]] * signs[:, :, None] * signs[:, None, :]
    quads = np.sum(conj * G[None, :, :], axis=(1, 2))
    return int(sum(t * t for t in traces)), int(sum(quads))


def _as_array(X) -> np.ndarray:
    return X.entries if hasattr(X, 'entries') else np.asarray(X, dtype=object)


def s_values(X) -> Tuple[Fraction, ...]:
    """All eight s_ij(X), in Lambda order."""
    X = _as_array(X)
    k = _check_point(X)
    Y, den = integerize(X)
    G = Y @ Y.T
    scale = den ** 4
    sums = {level: _level_sums(G, level) for level in range(5)}
    values = []
    for i, j in LAMBDA_ORDER:
        tr_sq, quad = sums[i]
        if j == 0:
            values.append(Fraction(tr_sq, 16 * k * scale))
        elif j == 1:
            values.append(Fraction(k * quad - tr_sq, 16 * k * scale))
        else:
            values.append(Fraction(quad, 16 * scale))
    return tuple(values)


def s_eval(pair: LambdaPair, X) -> Fraction:
    return s_values(X)[LAMBDA.index(pair)]


def s_eval_by_basis(pair: LambdaPair, X) -> Fraction:
    """The literal double sum over the V_i and U_j bases. Slow; small k only."""
    X = _as_array(X)
    k = _check_point(X)
    total = Fraction(0)
    for S in v_basis(pair.i).elements:
        M = X.T @ S.apply(X)
        for F in u_basis(pair.j, k):
            t = np.sum(M * F.matrix.T)
            total += Fraction(t) ** 2 / (16 * F.norm_sq)
    return total


def s_sum_check(X) -> Fraction:
    return sum(s_values(X), Fraction(0))


def generator_counts(k: int) -> Dict[Tuple[int, int], int]:
    return {(i, j): len(v_basis(i)) * len(u_basis(j, k)) for i, j in LAMBDA_ORDER}


def lambda_labels() -> List[str]:
    return [p.label for p in LAMBDA]
