"""Exact rational helpers shared by the algebraic modules."""
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from config import Config


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, (float, np.floating)):
        raise TypeError(f"refusing to convert float {value!r} to an exact rational")
    return Fraction(value)


def to_fraction_array(values) -> np.ndarray:
    """Copy ``values`` into an object array of Fractions."""
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def integerize(X: np.ndarray) -> Tuple[np.ndarray, int]:
    """Return (Y, D) with Y an integer object array and X == Y / D."""
    if X.size == 0:
        return np.zeros(X.shape, dtype=object), 1
    den = math.lcm(*[Fraction(v).denominator for v in X.flat])
    flat = [int(Fraction(v) * den) for v in X.flat]
    return np.array(flat, dtype=object).reshape(X.shape), den


def frobenius_sq(X: np.ndarray) -> Fraction:
    Y, den = integerize(X)
    return Fraction(sum(v * v for v in Y.flat), den * den)


def random_rational(rng: np.random.Generator, bound: Optional[int] = None) -> Fraction:
    bound = bound or Config.RANDOM_BOUND
    num = int(rng.integers(-bound, bound + 1))
    den = int(rng.integers(1, bound + 1))
    return Fraction(num, den)


def random_rational_matrix(rng: np.random.Generator, shape: Tuple[int, ...],
                           bound: Optional[int] = None) -> np.ndarray:
    bound = bound or Config.RANDOM_BOUND
    nums = rng.integers(-bound, bound + 1, size=shape)
    dens = rng.integers(1, bound + 1, size=shape)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Fraction(int(nums[idx]), int(dens[idx]))
    return out


def _to_sympy(value) -> sympy.Rational:
    q = to_fraction(value)
    return sympy.Rational(q.numerator, q.denominator)


def exact_rank(rows: Sequence[Sequence]) -> int:
    if len(rows) == 0:
        return 0
    return sympy.Matrix([[_to_sympy(v) for v in row] for row in rows]).rank()


def exact_solve(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Solve a square system exactly; None when the matrix is singular."""
    M = sympy.Matrix([[_to_sympy(v) for v in row] for row in A])
    if M.det() == 0:
        return None
    rhs = sympy.Matrix([_to_sympy(v) for v in b])
    return [to_fraction(v) for v in M.LUsolve(rhs)]


def mat_vec(A: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> List[Fraction]:
    return [sum((a * xi for a, xi in zip(row, x)), Fraction(0)) for row in A]


def vec_mat(y: Sequence[Fraction], A: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    cols = len(A[0])
    return [sum((y[i] * A[i][j] for i in range(len(A))), Fraction(0)) for j in range(cols)]


def format_rational(q) -> str:
    q = to_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_vector(values: Iterable) -> List[str]:
    return [format_rational(v) for v in values]
