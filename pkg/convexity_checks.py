"""Regression checks for the convexity of q_k.

q_k is convex, so a negative Hessian eigenvalue or a negative midpoint
slack is an implementation error and raises ConvexityRefutedError.
"""
import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Tuple

import numpy as np

from config import Config
from exceptions import ConstructionMismatchError, ConvexityRefutedError
from invariant_forms import (MatrixPoint, gradient, hessian_apply, hessian_matrix, q_eval_clifford,
                             q_eval_numeric)

logger = logging.getLogger(__name__)

CS_MIN = Fraction(0)
CS_MAX = Fraction(1, 4)
DEGREE_HALF = 2


@dataclass
class ConvexityReport:
    k: int
    num_samples: int
    min_hessian_eig: Optional[float] = None
    min_midpoint_slack: Optional[float] = None
    window_ok: Optional[bool] = None
    gradient_fd_error: Optional[float] = None
    hessian_fd_error: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def convexifying_shift(d: int, p_min, p_max) -> Fraction:
    """p - shift * ||x||^2d is convex whenever gap(p) fits the window."""
    return d * Fraction(p_min) - (d - 1) * Fraction(p_max)


def blekherman_window(d: int) -> Tuple[Fraction, Fraction]:
    width = Fraction(1, 2 * d - 1)
    return 1 - width, 1 + width


def gap_certifies_convex_not_sos(gap, d: int = DEGREE_HALF) -> bool:
    return gap > d


def normalized_q(X: MatrixPoint) -> Fraction:
    """(8/3) q_k(X) / ||X||^4, the affine rescaling of cs_k into the window."""
    t = X.frobenius_sq()
    if t == 0:
        raise ValueError("the zero point has no normalized value")
    scale = Fraction(2, 3) / (CS_MAX - CS_MIN)
    return scale * q_eval_clifford(X) / (t * t)


def blekherman_window_check(k: int, num_samples: int = 1000,
                            rng: Optional[np.random.Generator] = None) -> bool:
    """The exact bounds 0 <= cs_k <= ||X||^4 / 4 place q_k in the d = 2 window.

    Sampling (exact, at rational points) is only a sanity check on top.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    low, high = blekherman_window(DEGREE_HALF)
    shift = convexifying_shift(DEGREE_HALF, CS_MIN, CS_MAX)
    scale = Fraction(2, 3) / (CS_MAX - CS_MIN)
    analytic = scale * (CS_MIN - shift) == low and scale * (CS_MAX - shift) == high
    if not analytic:
        logger.error("window endpoints do not match the cs bounds")
        return False
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    for n in range(num_samples):
        X = MatrixPoint.random(k, rng)
        if X.frobenius_sq() == 0:
            continue
        value = normalized_q(X)
        if not low <= value <= high:
            logger.error(f"sample {n}: normalized q_{k} = {value} outside [{low}, {high}]")
            return False
    logger.info(f"window check passed for k={k} on {num_samples} samples")
    return True


def random_unit_point(k: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((16, k))
    return X / np.linalg.norm(X)


def hessian_min_eigenvalue(X, tol: Optional[float] = None) -> float:
    tol = Config.HESSIAN_TOL if tol is None else tol
    H = hessian_matrix(X)
    if not np.array_equal(H, H.T):
        raise ConstructionMismatchError("materialized Hessian is not symmetric")
    eigs = np.linalg.eigvalsh(H)
    scale = max(float(np.max(np.abs(eigs))), 1.0)
    min_eig = float(eigs[0])
    if min_eig < -tol * scale:
        logger.error(f"Hessian eigenvalue {min_eig:.3e} below -{tol:.1e} * {scale:.3e}")
        raise ConvexityRefutedError(f"Hessian has eigenvalue {min_eig:.3e}")
    return min_eig


def hessian_psd_sample(k: int, num_points: int = 100, tol: Optional[float] = None,
                       rng: Optional[np.random.Generator] = None,
                       points: Optional[Iterable] = None) -> ConvexityReport:
    if tol is not None and tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    points = list(points) if points is not None else [random_unit_point(k, rng) for _ in range(num_points)]
    worst = min(hessian_min_eigenvalue(X, tol) for X in points)
    logger.info(f"Hessian check k={k}: {len(points)} points, min eigenvalue {worst:.3e}")
    return ConvexityReport(k=k, num_samples=len(points), min_hessian_eig=worst)


def midpoint_slack(X: MatrixPoint, Y: MatrixPoint) -> Fraction:
    """(q(X) + q(Y)) / 2 - q((X + Y) / 2)."""
    mid = (X + Y).scale(Fraction(1, 2))
    return (q_eval_clifford(X) + q_eval_clifford(Y)) / 2 - q_eval_clifford(mid)


def midpoint_convexity_sample(k: int, num_pairs: int = 1000,
                              rng: Optional[np.random.Generator] = None,
                              bound: Optional[int] = None) -> Fraction:
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    worst = None
    for n in range(num_pairs):
        slack = midpoint_slack(MatrixPoint.random(k, rng, bound), MatrixPoint.random(k, rng, bound))
        if slack < 0:
            logger.error(f"pair {n}: midpoint slack {slack} < 0")
            raise ConvexityRefutedError(f"negative midpoint slack {slack} at pair {n}")
        worst = slack if worst is None else min(worst, slack)
    return worst if worst is not None else Fraction(0)


def gradient_fd_error(X: np.ndarray, Y: np.ndarray, h: float = 1e-5) -> float:
    """Relative error of <grad q(X), Y> against a central difference."""
    fd = (q_eval_numeric(X + h * Y) - q_eval_numeric(X - h * Y)) / (2 * h)
    exact = float(np.sum(gradient(X) * Y))
    return abs(fd - exact) / max(1.0, abs(exact))


def hessian_fd_error(X: np.ndarray, Y: np.ndarray, h: float = 1e-5) -> float:
    fd = (gradient(X + h * Y) - gradient(X - h * Y)) / (2 * h)
    exact = hessian_apply(X, Y)
    return float(np.linalg.norm(fd - exact) / max(1.0, np.linalg.norm(exact)))


def convexity_report(k: int, num_samples: int = 20, num_pairs: int = 100,
                     rng: Optional[np.random.Generator] = None) -> ConvexityReport:
    rng = rng or np.random.default_rng(Config.DEFAULT_SEED)
    report = hessian_psd_sample(k, num_samples, rng=rng)
    report.min_midpoint_slack = float(midpoint_convexity_sample(k, num_pairs, rng))
    report.window_ok = blekherman_window_check(k, num_samples, rng)
    X, Y = random_unit_point(k, rng), random_unit_point(k, rng)
    report.gradient_fd_error = gradient_fd_error(X, Y)
    report.hessian_fd_error = hessian_fd_error(X, Y)
    logger.info(f"convexity report for k={k}: {report.to_dict()}")
    return report
