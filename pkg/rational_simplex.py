"""Two-phase simplex over Fractions with Bland's rule.

Solves  min c.x  subject to  A x = b, x >= 0  exactly. An infeasible
problem comes back with a Farkas row y (y A >= 0, y b < 0) read off the
phase-one duals.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from exact import exact_rank, exact_solve, mat_vec, to_fraction, vec_mat

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'


@dataclass
class LpOutcome:
    status: str
    x: Optional[List[Fraction]] = None
    objective: Optional[Fraction] = None
    farkas_row: Optional[List[Fraction]] = None
    basis: List[int] = field(default_factory=list)
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class RationalSimplex:
    def __init__(self, A: Sequence[Sequence], b: Sequence, c: Optional[Sequence] = None):
        self.m = len(A)
        self.n = len(A[0]) if self.m else 0
        if len(b) != self.m:
            raise ValueError(f"right-hand side has {len(b)} entries for {self.m} rows")
        self.A = [[to_fraction(v) for v in row] for row in A]
        self.b = [to_fraction(v) for v in b]
        self.c = [to_fraction(v) for v in c] if c is not None else [Fraction(0)] * self.n
        if len(self.c) != self.n:
            raise ValueError(f"cost vector has {len(self.c)} entries for {self.n} columns")
        self.pivots = 0

        # Rows flipped so that b >= 0; artificial j = n + i starts basic in row i.
        self.row_sign = [1 if bi >= 0 else -1 for bi in self.b]
        width = self.n + self.m
        self.T = []
        for i in range(self.m):
            s = self.row_sign[i]
            row = [s * v for v in self.A[i]] + [Fraction(int(j == i)) for j in range(self.m)]
            row.append(s * self.b[i])
            self.T.append(row)
        self.basis = [self.n + i for i in range(self.m)]
        self.rhs = width
        self.reduced = []

    def _set_costs(self, cost: List[Fraction]):
        self.reduced = list(cost) + [Fraction(0)]
        for i, j in enumerate(self.basis):
            if cost[j] != 0:
                self.reduced = [r - cost[j] * t for r, t in zip(self.reduced, self.T[i])]

    def pivot(self, i: int, j: int):
        logger.debug(f"pivot: column {j} enters, column {self.basis[i]} leaves (row {i})")
        piv = self.T[i][j]
        self.T[i] = [v / piv for v in self.T[i]]
        for r in range(len(self.T)):
            f = self.T[r][j]
            if r != i and f != 0:
                self.T[r] = [a - f * p for a, p in zip(self.T[r], self.T[i])]
        f = self.reduced[j]
        if f != 0:
            self.reduced = [a - f * p for a, p in zip(self.reduced, self.T[i])]
        self.basis[i] = j
        self.pivots += 1

    def bland_step(self, allowed: int) -> str:
        entering = [j for j in range(allowed) if self.reduced[j] < 0]
        if not entering:
            return OPTIMAL
        j = entering[0]
        candidates = [(self.T[i][self.rhs] / self.T[i][j], self.basis[i], i)
                      for i in range(len(self.T)) if self.T[i][j] > 0]
        if not candidates:
            return UNBOUNDED
        _, _, i = min(candidates)
        self.pivot(i, j)
        return 'go_on'

    def run(self, allowed: int) -> str:
        while True:
            status = self.bland_step(allowed)
            if status in (OPTIMAL, UNBOUNDED):
                return status

    def _farkas_row(self) -> List[Fraction]:
        # phase-one dual y_i = 1 - reduced cost of artificial i
        y = [1 - self.reduced[self.n + i] for i in range(self.m)]
        return [self.row_sign[i] * -y[i] for i in range(self.m)]

    def _drive_out_artificials(self):
        i = 0
        while i < len(self.T):
            if self.basis[i] >= self.n:
                cols = [j for j in range(self.n) if self.T[i][j] != 0]
                if cols:
                    self.pivot(i, cols[0])
                else:
                    logger.debug(f"dropping redundant row {i}")
                    del self.T[i]
                    del self.basis[i]
                    continue
            i += 1

    def solve(self) -> LpOutcome:
        phase_one = [Fraction(0)] * self.n + [Fraction(1)] * self.m
        self._set_costs(phase_one)
        self.run(self.n)
        infeasibility = -self.reduced[self.rhs]
        if infeasibility > 0:
            row = self._farkas_row()
            logger.debug(f"phase one ended at {infeasibility}; Farkas row {row}")
            return LpOutcome(INFEASIBLE, farkas_row=row, pivots=self.pivots)

        self._drive_out_artificials()
        self._set_costs(self.c + [Fraction(0)] * self.m)
        status = self.run(self.n)
        if status == UNBOUNDED:
            return LpOutcome(UNBOUNDED, basis=list(self.basis), pivots=self.pivots)

        x = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            x[j] = self.T[i][self.rhs]
        objective = sum((ci * xi for ci, xi in zip(self.c, x)), Fraction(0))
        return LpOutcome(OPTIMAL, x=x, objective=objective, basis=list(self.basis),
                         pivots=self.pivots)


def solve_standard_form(A: Sequence[Sequence], b: Sequence,
                        c: Optional[Sequence] = None) -> LpOutcome:
    outcome = RationalSimplex(A, b, c).solve()
    logger.debug(f"simplex finished: {outcome.status} after {outcome.pivots} pivots")
    return outcome


def check_outcome(A: Sequence[Sequence], b: Sequence, outcome: LpOutcome) -> bool:
    """Exact re-check of a returned point or Farkas row."""
    A = [[to_fraction(v) for v in row] for row in A]
    b = [to_fraction(v) for v in b]
    if outcome.status == OPTIMAL:
        return all(v >= 0 for v in outcome.x) and mat_vec(A, outcome.x) == b
    if outcome.status == INFEASIBLE:
        y = outcome.farkas_row
        rhs = sum((yi * bi for yi, bi in zip(y, b)), Fraction(0))
        return all(v >= 0 for v in vec_mat(y, A)) and rhs < 0
    return True


def enumerate_basic_solutions(A: Sequence[Sequence], b: Sequence) -> List[Tuple[Tuple[int, ...], List[Fraction]]]:
    """All basic feasible solutions of a full-row-rank system, by brute force."""
    m, n = len(A), len(A[0])
    if exact_rank(A) != m:
        raise ValueError("enumeration needs a full-row-rank matrix")
    found = []
    for cols in combinations(range(n), m):
        sub = [[A[i][j] for j in cols] for i in range(m)]
        values = exact_solve(sub, b)
        if values is None or any(v < 0 for v in values):
            continue
        x = [Fraction(0)] * n
        for j, v in zip(cols, values):
            x[j] = v
        found.append((cols, x))
    return found
