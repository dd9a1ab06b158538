"""Combinatorial distance, the d_log transform and metric checkers."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ContractViolation
from .lamination import Lamination, same_language
from .torus import SlopeLamination, divergence_depth

FLOAT_SLACK = 1e-12
LOG4 = math.log(4.0)


@dataclass(frozen=True)
class CombDistance:
    """Value ``1/(depth+1)``, or 0 when the languages agree throughout.

    ``depth`` is the last length at which both realize the same paths.
    ``capped`` marks a zero that only holds up to the requested length.
    """

    value: Fraction
    depth: int | None
    witness: tuple | None = None
    capped: bool = False

    def __float__(self) -> float:
        return float(self.value)


def _witness(lam: Lamination, other: Lamination, r: int) -> tuple:
    a = set(lam.realized_paths(r).paths)
    b = set(other.realized_paths(r).paths)
    return min(a ^ b)


def agreement_depth(lam: Lamination, other: Lamination, r_max: int) -> int | None:
    """Largest length <= r_max at which both realize the same paths.

    Uses the first disagreement when both backends are factor closed and the
    literal maximum over all lengths otherwise.  ``None`` means agreement at
    ``r_max``.
    """
    if isinstance(lam, SlopeLamination) and isinstance(other, SlopeLamination) \
            and lam.track == other.track:
        return divergence_depth(lam.slope, other.slope, r_max)
    if lam.factor_closed and other.factor_closed:
        for r in range(1, r_max + 1):
            if not same_language(lam, other, r):
                return r - 1
        return None
    agree = [r for r in range(1, r_max + 1) if same_language(lam, other, r)]
    if agree and agree[-1] == r_max:
        return None
    return agree[-1] if agree else 0


def d_theta(lam: Lamination, other: Lamination, r_max: int) -> CombDistance:
    """Combinatorial distance min{1/(r+1) : same realized paths of length r}.

    Length 0 always agrees, so the value is at most 1.
    """
    if r_max < 1:
        raise ContractViolation("r_max must be >= 1")
    if lam.track != other.track:
        raise ContractViolation("laminations live on different tracks")
    if lam.provably_equal(other):
        return CombDistance(Fraction(0), None)
    depth = agreement_depth(lam, other, r_max)
    if depth is None:
        return CombDistance(Fraction(0), None, capped=True)
    return CombDistance(Fraction(1, depth + 1), depth, _witness(lam, other, depth + 1))


def d_log_transform(d: float) -> float:
    """1/|log(min(d, 1/4))|, natural logarithm; 0 at 0."""
    if d < 0 or math.isnan(d):
        raise ContractViolation(f"distance must be nonnegative, got {d}")
    if d == 0:
        return 0.0
    return 1.0 / abs(math.log(min(d, 0.25)))


def model_hausdorff(lam: Lamination, other: Lamination, b: float, r_max: int) -> float:
    """exp(-b / d_theta): a stand-in for the Hausdorff distance, not the geometric one."""
    if not b > 0:
        raise ContractViolation("b must be positive")
    dt = d_theta(lam, other, r_max)
    if dt.value == 0:
        return 0.0
    return math.exp(-b / float(dt.value))


def lipschitz_window(b: float) -> tuple:
    """Exact range of d_log(model_hausdorff) / d_theta over d_theta in (0, 1].

    Below the clamp the ratio is 1/b.  The clamp is reached only when
    b < log 4, for d > b/log 4, where the ratio 1/(d log 4) lies in
    [1/log 4, 1/b).
    """
    return min(1.0 / b, 1.0 / LOG4), 1.0 / b


# checkers

def distance_matrix(points: Sequence[Lamination], r_max: int, jobs: int = 1) -> list:
    n = len(points)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def one(ij):
        i, j = ij
        return d_theta(points[i], points[j], r_max)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(one, pairs))
    else:
        values = [one(ij) for ij in pairs]
    mat = [[CombDistance(Fraction(0), None) for _ in range(n)] for _ in range(n)]
    for (i, j), v in zip(pairs, values):
        mat[i][j] = mat[j][i] = v
    return mat


@dataclass
class UltrametricReport:
    n_points: int
    n_triples: int
    violations: list = field(default_factory=list)  # (i, j, k, d_ij, d_jk, d_ik)
    distances: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _depth_code(d: CombDistance, big: int) -> int:
    return big if d.value == 0 else d.depth


def check_ultrametric(points: Sequence[Lamination], r_max: int, jobs: int = 1) -> UltrametricReport:
    """Check d(x,z) <= max(d(x,y), d(y,z)) on every triple of points."""
    n = len(points)
    mat = distance_matrix(points, r_max, jobs)
    big = r_max + 1
    depth = np.array([[_depth_code(mat[i][j], big) if i != j else big for j in range(n)]
                      for i in range(n)], dtype=np.int64)
    flagged = kernels.ultrametric_violations(depth)
    report = UltrametricReport(n, n * (n - 1) * (n - 2) // 6, distances=mat)
    for i, j, k in flagged.tolist():
        dij, djk, dik = mat[i][j].value, mat[j][k].value, mat[i][k].value
        # confirm with exact rationals before reporting
        if dik > max(dij, djk) or dij > max(dik, djk) or djk > max(dij, dik):
            report.violations.append((i, j, k, dij, djk, dik))
    return report


def f_subadditive(u):
    """f(u) = -1/log u with f(0) = 0."""
    return 0.0 if u <= 0 else -1.0 / math.log(u)


def h_margin(u: float, v: float) -> float:
    return f_subadditive(u) + f_subadditive(v) - f_subadditive(u + v)


CRITICAL_POINT = 2.0 ** (-2.0 - math.sqrt(2.0))
CRITICAL_VALUE = (3.0 - 2.0 * math.sqrt(2.0)) / math.log(2.0)


@dataclass
class TriangleReport:
    grid_min: float
    grid_argmin: tuple
    critical_point: float
    critical_value: float
    boundary_max_abs: float
    sample_min: float | None = None
    sample_argmin: tuple | None = None

    @property
    def passed(self) -> bool:
        ok = self.grid_min >= -FLOAT_SLACK and self.critical_value > 0
        if self.sample_min is not None:
            ok = ok and self.sample_min >= -FLOAT_SLACK
        return ok


def critical_point_numeric() -> float:
    """Root of f'(u) = f'(2u) on (0, 1/4), with f'(u) = 1/(u log^2 u)."""
    from scipy.optimize import brentq

    g = lambda u: 2.0 * math.log(2.0 * u) ** 2 - math.log(u) ** 2
    return brentq(g, 1e-6, 0.2, xtol=1e-16, rtol=4 * np.finfo(float).eps)


def check_triangle_dlog(samples: Iterable[tuple] | None = None,
                        grid_size: int = 1000) -> TriangleReport:
    """Subadditivity of f on [0, 1/4]^2 and the triangle inequality for d_log.

    ``samples`` are distance triples (u, v, w) with w <= u + v; each must
    satisfy d_log(w) <= d_log(u) + d_log(v).
    """
    us = np.arange(grid_size + 1, dtype=np.float64) / (4.0 * grid_size)
    best, i, j = kernels.dlog_margin_grid(us)
    u_star = critical_point_numeric()
    boundary = max(abs(h_margin(0.0, float(v))) for v in us)
    report = TriangleReport(best, (float(us[i]), float(us[j])), u_star,
                            h_margin(u_star, u_star), boundary)
    if samples is not None:
        worst, arg = math.inf, None
        for u, v, w in samples:
            if w > u + v + FLOAT_SLACK:
                raise ContractViolation(f"sample {(u, v, w)} breaks the triangle inequality")
            m = d_log_transform(u) + d_log_transform(v) - d_log_transform(w)
            if m < worst:
                worst, arg = m, (u, v, w)
        report.sample_min, report.sample_argmin = worst, arg
    return report
