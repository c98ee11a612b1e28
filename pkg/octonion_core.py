"""Exact octonion arithmetic.

The multiplication table is read off the right-multiplication matrix
[R_u] (entry (r, c) equals sign(r, c) * a_{r xor c}), in the sense that
[R_u][v] = [vu]. Every product below goes through that matrix.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import numpy as np

from exact import random_rational, to_fraction

logger = logging.getLogger(__name__)

DIM = 8

_R_SIGNS = (
    (+1, -1, -1, -1, -1, -1, -1, -1),
    (+1, +1, +1, -1, +1, -1, -1, +1),
    (+1, -1, +1, +1, +1, +1, -1, -1),
    (+1, +1, -1, +1, +1, -1, +1, -1),
    (+1, -1, -1, -1, +1, +1, +1, +1),
    (+1, +1, -1, +1, -1, +1, -1, +1),
    (+1, +1, +1, -1, -1, +1, +1, -1),
    (+1, -1, +1, +1, -1, -1, +1, +1),
)


@dataclass(frozen=True)
class OctonionTable:
    """Sign pattern of [R_u]; the coordinate index at (r, c) is r xor c."""
    signs: Tuple[Tuple[int, ...], ...] = _R_SIGNS

    def with_flipped_sign(self, row: int, col: int) -> 'OctonionTable':
        rows = [list(r) for r in self.signs]
        rows[row][col] = -rows[row][col]
        logger.warning(f"Multiplication table corrupted at ({row}, {col})")
        return OctonionTable(tuple(tuple(r) for r in rows))

    def right_matrix(self, coords: Tuple[Fraction, ...]) -> np.ndarray:
        out = np.empty((DIM, DIM), dtype=object)
        for r in range(DIM):
            for c in range(DIM):
                out[r, c] = self.signs[r][c] * coords[r ^ c]
        return out


DEFAULT_TABLE = OctonionTable()


@dataclass(frozen=True)
class Octonion:
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != DIM:
            raise ValueError(f"an octonion has {DIM} coordinates, got {len(self.coords)}")
        object.__setattr__(self, 'coords', tuple(to_fraction(c) for c in self.coords))

    @classmethod
    def unit(cls, i: int) -> 'Octonion':
        if not 0 <= i < DIM:
            raise ValueError(f"unit index {i} out of range 0..7")
        return cls(tuple(Fraction(int(j == i)) for j in range(DIM)))

    @classmethod
    def zero(cls) -> 'Octonion':
        return cls((Fraction(0),) * DIM)

    @classmethod
    def from_array(cls, values: Iterable) -> 'Octonion':
        return cls(tuple(values))

    def __add__(self, other: 'Octonion') -> 'Octonion':
        return Octonion(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: 'Octonion') -> 'Octonion':
        return Octonion(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> 'Octonion':
        return Octonion(tuple(-a for a in self.coords))

    def scale(self, t) -> 'Octonion':
        t = to_fraction(t)
        return Octonion(tuple(t * a for a in self.coords))

    @property
    def re(self) -> Fraction:
        return self.coords[0]

    def norm_sq(self) -> Fraction:
        return sum((a * a for a in self.coords), Fraction(0))

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=object)


def right_mult_matrix(u: Octonion, table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    return table.right_matrix(u.coords)


def mul(a: Octonion, b: Octonion, table: OctonionTable = DEFAULT_TABLE) -> Octonion:
    return Octonion.from_array(right_mult_matrix(b, table) @ a.as_array())


def left_mult_matrix(u: Octonion, table: OctonionTable = DEFAULT_TABLE) -> np.ndarray:
    """Matrix of v -> uv, column c being [u e_c]."""
    cols = [mul(u, Octonion.unit(c), table).coords for c in range(DIM)]
    return np.array(cols, dtype=object).T


def conj(a: Octonion) -> Octonion:
    return Octonion((a.coords[0],) + tuple(-c for c in a.coords[1:]))


def inner(a: Octonion, b: Octonion) -> Fraction:
    return sum((x * y for x, y in zip(a.coords, b.coords)), Fraction(0))


def norm_sq(a: Octonion) -> Fraction:
    return a.norm_sq()


def random_octonion(rng: np.random.Generator, bound: Optional[int] = None) -> Octonion:
    return Octonion(tuple(random_rational(rng, bound) for _ in range(DIM)))


@dataclass(frozen=True)
class OctonionVector:
    entries: Tuple[Octonion, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("an octonion vector needs at least one entry")

    @property
    def k(self) -> int:
        return len(self.entries)

    def norm_sq(self) -> Fraction:
        return sum((e.norm_sq() for e in self.entries), Fraction(0))

    def hermitian_product(self, other: 'OctonionVector',
                          table: OctonionTable = DEFAULT_TABLE) -> Octonion:
        """(x, y) = sum_j conj(x_j) y_j."""
        if other.k != self.k:
            raise ValueError(f"length mismatch: {self.k} vs {other.k}")
        total = Octonion.zero()
        for x, y in zip(self.entries, other.entries):
            total = total + mul(conj(x), y, table)
        return total
