"""The Clifford system S_0..S_8 on R^16 and the product basis S_J.

Every S_J is a signed permutation matrix, stored as (perm, signs) with
row p holding signs[p] in column perm[p].
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Tuple

import numpy as np

from octonion_core import DEFAULT_TABLE, Octonion, OctonionTable, conj, right_mult_matrix

logger = logging.getLogger(__name__)

SIZE = 16
NUM_GENERATORS = 9
MAX_LEVEL = 4
# S_0 S_1 ... S_8 for the displayed [R_u] sign pattern
FULL_PRODUCT_SIGN = 1


@dataclass(frozen=True)
class CliffordMatrix:
    subset: Tuple[int, ...]
    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.subset)

    @property
    def entries(self) -> np.ndarray:
        out = np.zeros((SIZE, SIZE), dtype=np.int64)
        out[np.arange(SIZE), list(self.perm)] = self.signs
        return out

    @property
    def symmetry_class(self) -> str:
        dense = self.entries
        if np.array_equal(dense, dense.T):
            return 'symmetric'
        if np.array_equal(dense, -dense.T):
            return 'skew'
        return 'neither'

    def __matmul__(self, other: 'CliffordMatrix') -> 'CliffordMatrix':
        perm = tuple(other.perm[self.perm[p]] for p in range(SIZE))
        signs = tuple(self.signs[p] * other.signs[self.perm[p]] for p in range(SIZE))
        return CliffordMatrix(self.subset + other.subset, perm, signs)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """S X for any 16-row array, exact or floating."""
        return X[list(self.perm)] * np.array(self.signs, dtype=X.dtype).reshape(-1, 1)

    def trace_inner(self, Z: np.ndarray):
        """tr(S^T Z)."""
        return sum(s * Z[p, q] for p, (q, s) in enumerate(zip(self.perm, self.signs)))


def _from_dense(subset: Tuple[int, ...], dense: np.ndarray) -> CliffordMatrix:
    perm, signs = [], []
    for p in range(SIZE):
        nonzero = [q for q in range(SIZE) if dense[p, q] != 0]
        if len(nonzero) != 1 or dense[p, nonzero[0]] not in (1, -1):
            raise ValueError(f"S_{list(subset)} row {p} is not a signed permutation row")
        perm.append(nonzero[0])
        signs.append(int(dense[p, nonzero[0]]))
    return CliffordMatrix(subset, tuple(perm), tuple(signs))


@lru_cache(maxsize=None)
def build_S(i: int, table: OctonionTable = DEFAULT_TABLE) -> CliffordMatrix:
    if not 0 <= i < NUM_GENERATORS:
        raise ValueError(f"Clifford generator index {i} out of range 0..8")
    dense = np.zeros((SIZE, SIZE), dtype=object)
    if i == 8:
        dense[:8, :8] = np.eye(8, dtype=int)
        dense[8:, 8:] = -np.eye(8, dtype=int)
    else:
        e = Octonion.unit(i)
        dense[:8, 8:] = right_mult_matrix(e, table)
        dense[8:, :8] = right_mult_matrix(conj(e), table)
    return _from_dense((i,), dense)


def identity() -> CliffordMatrix:
    return CliffordMatrix((), tuple(range(SIZE)), (1,) * SIZE)


@lru_cache(maxsize=None)
def build_SJ(J: Tuple[int, ...], table: OctonionTable = DEFAULT_TABLE) -> CliffordMatrix:
    J = tuple(sorted(J))
    if len(set(J)) != len(J) or any(not 0 <= j < NUM_GENERATORS for j in J):
        raise ValueError(f"invalid index set {J}")
    result = identity()
    for j in J:
        result = result @ build_S(j, table)
    return result


@dataclass(frozen=True)
class VSubspaceBasis:
    level: int
    elements: Tuple[CliffordMatrix, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def perms(self) -> np.ndarray:
        return np.array([e.perm for e in self.elements], dtype=np.intp)

    @property
    def signs(self) -> np.ndarray:
        return np.array([list(e.signs) for e in self.elements], dtype=object)


@lru_cache(maxsize=None)
def v_basis(level: int, table: OctonionTable = DEFAULT_TABLE) -> VSubspaceBasis:
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level {level} out of range 0..4")
    elements = tuple(build_SJ(J, table) for J in combinations(range(NUM_GENERATORS), level))
    return VSubspaceBasis(level, elements)


def project_V(level: int, Z: np.ndarray, table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    """Orthogonal projection of a 16x16 matrix onto span{S_J : |J| = level}.

    ||S_J||^2 = 16 for every J, so the coefficients stay rational.
    """
    out = np.zeros((SIZE, SIZE), dtype=object)
    for S in v_basis(level, table).elements:
        coeff = Fraction(S.trace_inner(Z)) / 16
        if coeff == 0:
            continue
        for p, (q, s) in enumerate(zip(S.perm, S.signs)):
            out[p, q] += coeff * s
    return out


def clifford_relation_report(table: OctonionTable = DEFAULT_TABLE) -> List[Dict]:
    """Check S_i S_j + S_j S_i = 2 delta_ij I for all 81 ordered pairs."""
    dense = [build_S(i, table).entries for i in range(NUM_GENERATORS)]
    eye = np.eye(SIZE, dtype=np.int64)
    records = []
    for i in range(NUM_GENERATORS):
        for j in range(NUM_GENERATORS):
            anti = dense[i] @ dense[j] + dense[j] @ dense[i]
            ok = bool(np.array_equal(anti, 2 * eye * int(i == j)))
            records.append({'i': i, 'j': j, 'passed': ok})
    failed = [r for r in records if not r['passed']]
    if failed:
        logger.error(f"{len(failed)} Clifford relations violated, first: {failed[0]}")
    return records


def full_product_sign(table: OctonionTable = DEFAULT_TABLE) -> Optional[int]:
    """+1 or -1 when S_0 S_1 ... S_8 = +-I, None when the product is not central."""
    S = build_SJ(tuple(range(NUM_GENERATORS)), table)
    if S.perm != tuple(range(SIZE)) or len(set(S.signs)) != 1:
        return None
    return int(S.signs[0])


def full_product_check(table: OctonionTable = DEFAULT_TABLE) -> bool:
    sign = full_product_sign(table)
    if sign != FULL_PRODUCT_SIGN:
        logger.error(f"S_0 ... S_8 has sign {sign}, expected {FULL_PRODUCT_SIGN}")
        return False
    return True


def all_basis_elements(table: OctonionTable = DEFAULT_TABLE) -> List[CliffordMatrix]:
    return [S for level in range(MAX_LEVEL + 1) for S in v_basis(level, table).elements]


def gram_matrix(table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    """Trace Gram matrix of the 256 S_J with |J| <= 4; 16 I when they are orthogonal."""
    flat = np.array([S.entries.reshape(-1) for S in all_basis_elements(table)], dtype=np.int64)
    return flat @ flat.T


def expected_count(level: int) -> int:
    return comb(NUM_GENERATORS, level)
