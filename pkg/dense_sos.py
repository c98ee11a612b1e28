"""Generic SOS bounds for small dense forms: the Motzkin form and stable-set quartics."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import cvxpy as cp
import numpy as np
from scipy.optimize import minimize

from config import Config
from exceptions import FormParseError, SdpConvergenceError, UndefinedGapError

logger = logging.getLogger(__name__)

MAX_VARIABLES = 6
MIN_SOLVER_TOL = 1e-12
Exponent = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class DenseForm:
    n: int
    degree: int
    coeffs: Dict[Exponent, Fraction]
    name: str = 'form'

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"a form needs at least one variable, got n={self.n}")
        if self.degree < 2 or self.degree % 2:
            raise ValueError(f"degree must be even and positive, got {self.degree}")
        clean = {}
        for exp, c in self.coeffs.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.n or any(e < 0 for e in exp) or sum(exp) != self.degree:
                raise ValueError(f"exponent {exp} does not fit a degree-{self.degree} form in {self.n} variables")
            c = Fraction(c)
            if c != 0:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        object.__setattr__(self, 'coeffs', clean)

    @property
    def half_degree(self) -> int:
        return self.degree // 2

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.coeffs.get(tuple(exp), Fraction(0))

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        exps = np.array(list(self.coeffs), dtype=int).reshape(-1, self.n)
        vals = np.array([float(c) for c in self.coeffs.values()])
        return exps, vals

    def __call__(self, x: Sequence[float]) -> float:
        exps, vals = self._arrays()
        x = np.asarray(x, dtype=float)
        return float(vals @ np.prod(x ** exps, axis=1))

    def exact_value(self, x: Sequence) -> Fraction:
        x = [Fraction(v) for v in x]
        total = Fraction(0)
        for exp, c in self.coeffs.items():
            term = c
            for xi, e in zip(x, exp):
                term *= xi ** e
            total += term
        return total

    def grad(self, x: Sequence[float]) -> np.ndarray:
        exps, vals = self._arrays()
        x = np.asarray(x, dtype=float)
        out = np.zeros(self.n)
        for j in range(self.n):
            lowered = exps.copy()
            lowered[:, j] = np.maximum(lowered[:, j] - 1, 0)
            out[j] = vals @ (exps[:, j] * np.prod(x ** lowered, axis=1))
        return out

    def __sub__(self, other: 'DenseForm') -> 'DenseForm':
        if (other.n, other.degree) != (self.n, self.degree):
            raise ValueError("forms differ in variables or degree")
        coeffs = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            coeffs[exp] = coeffs.get(exp, Fraction(0)) - c
        return DenseForm(self.n, self.degree, coeffs, f"{self.name}-{other.name}")


def motzkin_form() -> DenseForm:
    """x^2 y^4 + x^4 y^2 - 3 x^2 y^2 z^2 + z^6."""
    return DenseForm(3, 6, {(2, 4, 0): 1, (4, 2, 0): 1, (2, 2, 2): -3, (0, 0, 6): 1}, 'motzkin')


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def sphere_power_form(n: int, d: int) -> DenseForm:
    """||x||^{2d} by the multinomial theorem."""
    coeffs = {}
    for a in _compositions(d, n):
        mult = factorial(d)
        for ai in a:
            mult //= factorial(ai)
        coeffs[tuple(2 * ai for ai in a)] = Fraction(mult)
    return DenseForm(n, 2 * d, coeffs, f'sphere{2 * d}')


def real_cauchy_schwarz_form(k: int) -> DenseForm:
    """||x||^2 ||y||^2 - (x.y)^2 on R^k x R^k."""
    n = 2 * k
    if n > MAX_VARIABLES:
        raise ValueError(f"2k must be at most {MAX_VARIABLES}, got k={k}")
    coeffs: Dict[Exponent, Fraction] = {}

    def add4(i, j, a, b, c):
        exp = [0] * n
        for idx in (i, j, a, b):
            exp[idx] += 1
        key = tuple(exp)
        coeffs[key] = coeffs.get(key, Fraction(0)) + c

    for i in range(k):
        for j in range(k):
            add4(i, i, k + j, k + j, 1)
            add4(i, k + i, j, k + j, -1)
    return DenseForm(n, 4, coeffs, f'cs{k}')


@dataclass(frozen=True)
class Graph:
    n: int
    edges: FrozenSet[Tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"a graph needs at least one vertex, got {self.n}")
        clean = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range 0..{self.n - 1}")
            clean.add((min(i, j), max(i, j)))
        object.__setattr__(self, 'edges', frozenset(clean))

    @classmethod
    def complete(cls, n: int) -> 'Graph':
        return cls(n, frozenset(combinations(range(n), 2)))

    @classmethod
    def cycle(cls, n: int) -> 'Graph':
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        return cls(n)

    def is_independent(self, vertices: Sequence[int]) -> bool:
        return all((a, b) not in self.edges for a, b in combinations(sorted(vertices), 2))

    def independence_number(self) -> int:
        for size in range(self.n, 0, -1):
            if any(self.is_independent(s) for s in combinations(range(self.n), size)):
                return size
        return 0


def stable_set_form(graph: Graph) -> DenseForm:
    """sum_i x_i^4 + 2 sum_{ij in E} x_i^2 x_j^2, with sphere minimum 1 / alpha(G)."""
    if graph.n > MAX_VARIABLES:
        raise ValueError(f"at most {MAX_VARIABLES} vertices supported, got {graph.n}")
    coeffs = {}
    for i in range(graph.n):
        exp = [0] * graph.n
        exp[i] = 4
        coeffs[tuple(exp)] = 1
    for i, j in graph.edges:
        exp = [0] * graph.n
        exp[i] = exp[j] = 2
        coeffs[tuple(exp)] = 2
    return DenseForm(graph.n, 4, coeffs, f'stable_set_{graph.n}')


def parse_form_text(text: str, name: str = 'form') -> DenseForm:
    """One term per line: ``coefficient e_1 ... e_n``; '#' starts a comment."""
    coeffs: Dict[Exponent, Fraction] = {}
    n = degree = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise FormParseError("expected a coefficient followed by exponents", lineno)
        try:
            coeff = Fraction(parts[0])
            exp = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise FormParseError(f"cannot read term {line!r}", lineno)
        if any(e < 0 for e in exp):
            raise FormParseError("negative exponent", lineno)
        if n is None:
            n, degree = len(exp), sum(exp)
        if len(exp) != n:
            raise FormParseError(f"expected {n} exponents, got {len(exp)}", lineno)
        if sum(exp) != degree:
            raise FormParseError(f"term has degree {sum(exp)}, expected {degree}", lineno)
        coeffs[exp] = coeffs.get(exp, Fraction(0)) + coeff
    if n is None:
        raise FormParseError("no terms found")
    if degree % 2 or degree == 0:
        raise FormParseError(f"degree {degree} is not even and positive")
    return DenseForm(n, degree, coeffs, name)


def parse_graph_text(text: str) -> Graph:
    """First line ``n m``, then m lines ``i j`` with 0-based vertices."""
    lines = [(no, raw.split('#', 1)[0].strip()) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise FormParseError("empty graph file")
    header_no, header = lines[0]
    try:
        n, m = (int(v) for v in header.split())
    except ValueError:
        raise FormParseError(f"header must be 'n m', got {header!r}", header_no)
    if len(lines) - 1 != m:
        raise FormParseError(f"header announces {m} edges, found {len(lines) - 1}", header_no)
    edges = []
    for lineno, line in lines[1:]:
        try:
            i, j = (int(v) for v in line.split())
        except ValueError:
            raise FormParseError(f"edge must be 'i j', got {line!r}", lineno)
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise FormParseError(f"invalid edge ({i}, {j}) for {n} vertices", lineno)
        edges.append((i, j))
    return Graph(n, frozenset(edges))


def monomial_basis(n: int, d: int) -> List[Exponent]:
    """Degree-d monomials, graded lexicographic."""
    return list(_compositions(d, n))


@dataclass
class SdpResult:
    gamma: float
    gram: np.ndarray
    primal_dual_gap: float
    residual: float
    min_gram_eig: float
    status: str


def solver_options(solver: str, tol: float) -> Dict[str, float]:
    """Solver stopping criteria two orders tighter than the accuracy asked of the result."""
    inner = max(tol / 100, MIN_SOLVER_TOL)
    if solver == cp.CLARABEL:
        return {'tol_gap_abs': inner, 'tol_gap_rel': inner, 'tol_feas': inner}
    if solver == cp.SCS:
        return {'eps_abs': inner, 'eps_rel': inner}
    return {}


def sos_lower_bound(p: DenseForm, tol: Optional[float] = None,
                    solver: Optional[str] = None) -> SdpResult:
    """max gamma with p - gamma ||x||^{2d} = m^T Q m, Q PSD."""
    tol = Config.DEFAULT_TOL if tol is None else tol
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    solver = solver or Config.SDP_SOLVER
    d = p.half_degree
    basis = monomial_basis(p.n, d)
    size = len(basis)
    sphere = sphere_power_form(p.n, d)

    pairs: Dict[Exponent, List[Tuple[int, int]]] = {}
    for a in range(size):
        for b in range(size):
            alpha = tuple(x + y for x, y in zip(basis[a], basis[b]))
            pairs.setdefault(alpha, []).append((a, b))
    stray = set(p.coeffs) - set(pairs)
    if stray:
        raise ValueError(f"monomials {sorted(stray)} are not reachable from the Gram basis")

    Q = cp.Variable((size, size), symmetric=True)
    gamma = cp.Variable()
    alphas = sorted(pairs, reverse=True)
    equalities = []
    for alpha in alphas:
        gram_coeff = sum(Q[a, b] for a, b in pairs[alpha])
        target = float(p.coefficient(alpha)) - gamma * float(sphere.coefficient(alpha))
        equalities.append(gram_coeff == target)
    problem = cp.Problem(cp.Maximize(gamma), [Q >> 0] + equalities)
    logger.info(f"solving SOS bound for {p.name}: Gram basis {size}, {len(alphas)} equations")
    try:
        problem.solve(solver=solver, **solver_options(solver, tol))
    except cp.error.SolverError as e:
        raise SdpConvergenceError(f"{solver} failed on {p.name}: {e}")
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise SdpConvergenceError(f"{solver} ended with status {problem.status} on {p.name}")
    if problem.status == cp.OPTIMAL_INACCURATE:
        logger.warning(f"{solver} reports an inaccurate optimum for {p.name}")

    G = np.asarray(Q.value)
    g = float(gamma.value)
    residual = max(abs(float(p.coefficient(alpha)) - g * float(sphere.coefficient(alpha))
                       - sum(G[a, b] for a, b in pairs[alpha])) for alpha in alphas)
    min_eig = float(np.linalg.eigvalsh((G + G.T) / 2)[0])

    duals = np.array([float(np.sum(c.dual_value)) for c in equalities])
    norm = sum(float(sphere.coefficient(alpha)) * y for alpha, y in zip(alphas, duals))
    if abs(norm) > 1e-12:
        dual_obj = sum(float(p.coefficient(alpha)) * y for alpha, y in zip(alphas, duals)) / norm
        gap = abs(dual_obj - g)
    else:
        gap = float('inf')
    if residual > tol or min_eig < -tol or gap > tol * max(1.0, abs(g)):
        logger.error(f"{p.name}: residual {residual:.2e}, min Gram eigenvalue {min_eig:.2e}, "
                     f"primal-dual gap {gap:.2e} against tolerance {tol:.1e}")
        raise SdpConvergenceError(
            f"{solver} result for {p.name} misses tolerance {tol:.1e}: residual {residual:.2e}, "
            f"min Gram eigenvalue {min_eig:.2e}, primal-dual gap {gap:.2e}")
    logger.info(f"SOS bound for {p.name}: gamma = {g:.8f} (gap {gap:.1e})")
    return SdpResult(g, G, gap, residual, min_eig, problem.status)


def _sphere_ratio(p: DenseForm):
    d = p.half_degree

    def value(x):
        r = float(x @ x)
        return p(x) / r ** d

    def grad(x):
        r = float(x @ x)
        return p.grad(x) / r ** d - 2 * d * p(x) * x / r ** (d + 1)

    return value, grad


def sphere_extrema(p: DenseForm, starts: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None) -> Tuple[float, float]:
    """Multistart local search for min and max of p on the unit sphere."""
    if p.n > MAX_VARIABLES:
        raise ValueError(f"at most {MAX_VARIABLES} variables supported, got {p.n}")
    starts = Config.SPHERE_STARTS if starts is None else starts
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    value, grad = _sphere_ratio(p)

    grid = [np.array(v, dtype=float) for v in product((-1, 0, 1), repeat=p.n) if any(v)]
    grid_values = [value(x) for x in grid]
    best_min, best_max = min(grid_values), max(grid_values)
    order = np.argsort(grid_values)
    seeds = [grid[i] for i in order[:5]] + [grid[i] for i in order[-5:]]
    seeds += [rng.standard_normal(p.n) for _ in range(starts)]

    for x0 in seeds:
        low = minimize(value, x0, jac=grad, method='BFGS')
        high = minimize(lambda x: -value(x), x0, jac=lambda x: -grad(x), method='BFGS')
        if np.all(np.isfinite(low.x)) and np.any(low.x):
            best_min = min(best_min, value(low.x))
        if np.all(np.isfinite(high.x)) and np.any(high.x):
            best_max = max(best_max, value(high.x))
    logger.debug(f"sphere extrema of {p.name}: [{best_min:.8f}, {best_max:.8f}]")
    return best_min, best_max


def gap_estimate(p: DenseForm, tol: Optional[float] = None,
                 extrema: Optional[Tuple[float, float]] = None,
                 result: Optional[SdpResult] = None,
                 rng: Optional[np.random.Generator] = None) -> float:
    """(p_max - p_min^sos) / (p_max - p_min), reusing precomputed extrema and SDP result."""
    p_min, p_max = extrema if extrema is not None else sphere_extrema(p, rng=rng)
    if p_max - p_min < 1e-9 * max(1.0, abs(p_max)):
        raise UndefinedGapError(f"{p.name} is constant on the sphere; gap is undefined")
    if result is None:
        result = sos_lower_bound(p, tol)
    return (p_max - result.gamma) / (p_max - p_min)
