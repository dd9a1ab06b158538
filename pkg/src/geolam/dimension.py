"""Box-counting estimates from censuses of realized path families.

A census at radius r counts the distinct length-(2r+1) families over a sample
of laminations.  Each family is a cover set whose diameter is bounded by the
schedule's ``eps(r)``, so ``log N_r / log(1/eps_r)`` tracks the dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ContractViolation
from .lamination import Lamination, from_multicurve
from .torus import SlopeLamination, farey_slopes, slope_to_lamination
from .track import TrainTrack, euler_characteristic, relation_matrix
from .zippers import better_exponent, census_realized_families


@dataclass(frozen=True)
class ScaleSchedule:
    mode: str  # "exp": eps = a e^(-b r); "recip": eps = a / r
    rs: tuple
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.mode not in ("exp", "recip"):
            raise ContractViolation(f"unknown schedule mode {self.mode!r}")
        if not (self.a > 0 and self.b > 0):
            raise ContractViolation("schedule constants must be positive")
        if not self.rs or any(r < 1 for r in self.rs):
            raise ContractViolation("radii must be positive")
        if any(r2 <= r1 for r1, r2 in zip(self.rs, self.rs[1:])):
            raise ContractViolation("radii must be strictly increasing")

    @classmethod
    def exponential(cls, rs, a: float = 1.0, b: float = 1.0) -> "ScaleSchedule":
        return cls("exp", tuple(rs), a, b)

    @classmethod
    def reciprocal(cls, rs, a: float = 1.0) -> "ScaleSchedule":
        return cls("recip", tuple(rs), a)

    def eps(self, r: int) -> float:
        if self.mode == "exp":
            return self.a * math.exp(-self.b * r)
        return self.a / r

    def log_inv_eps(self, r: int) -> float:
        """log(1/eps) without underflow for large r."""
        if self.mode == "exp":
            return self.b * r - math.log(self.a)
        return math.log(r) - math.log(self.a)

    def pairs(self) -> list:
        return [(r, self.eps(r)) for r in self.rs]


@dataclass(frozen=True)
class CoverRow:
    r: int
    eps: float
    count: int
    running: float  # log N / log(1/eps), nan where log(1/eps) <= 0


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    intercept: float
    residual: float  # root mean square of the fit
    r_range: tuple
    n_scales: int
    source: str = "census"


def _consecutive_farey(sample: Sequence[Lamination]) -> bool:
    if len(sample) < 2 or not all(isinstance(s, SlopeLamination) and s.slope.is_rational
                                  for s in sample):
        return False
    if len({s.track for s in sample}) != 1:
        return False
    pq = [(s.slope.p, s.slope.q) for s in sample]
    return all(p2 * q1 - p1 * q2 == 1 for (p1, q1), (p2, q2) in zip(pq, pq[1:]))


def census_sizes(track: TrainTrack, sample: Sequence[Lamination], rs: Sequence[int],
                 jobs: int = 1) -> list:
    """N_r for each r, using the neighbour-pair count for consecutive Farey samples."""
    if _consecutive_farey(sample):
        bden = np.array([s.slope.p + s.slope.q for s in sample], dtype=np.int64)
        lengths = np.array([2 * r + 1 for r in rs], dtype=np.int64)
        return [int(x) for x in kernels.census_counts(bden, lengths)]
    return [census_realized_families(track, sample, r, jobs).size for r in rs]


def cover_counts(track: TrainTrack, sample: Sequence[Lamination], schedule: ScaleSchedule,
                 jobs: int = 1) -> list:
    if not sample:
        raise ContractViolation("empty sample")
    counts = census_sizes(track, sample, schedule.rs, jobs)
    rows = []
    for r, n in zip(schedule.rs, counts):
        denom = schedule.log_inv_eps(r)
        running = math.log(n) / denom if denom > 0 else math.nan
        rows.append(CoverRow(r, schedule.eps(r), n, running))
    return rows


def fit_loglog(xs: Sequence[float], ys: Sequence[float]) -> tuple:
    """Least-squares line through (xs, ys); returns (slope, intercept, rms residual)."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if len(x) < 4:
        raise ContractViolation("need at least 4 scales")
    if np.ptp(x) == 0:
        raise ContractViolation("degenerate schedule: all scales equal")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def estimate_dimension(rows: Sequence[CoverRow], schedule: ScaleSchedule,
                       window: str | tuple = "top-half", source: str = "census") -> DimensionEstimate:
    """Slope of log N against log(1/eps).

    ``window`` is ``"top-half"`` (the larger half of the radii, at least four),
    ``"all"``, or an inclusive ``(r_lo, r_hi)`` range.
    """
    rows = list(rows)
    if window == "all":
        used = rows
    elif window == "top-half":
        used = rows[len(rows) // 2:]
        if len(used) < 4:
            used = rows[-4:]
    else:
        lo, hi = window
        used = [row for row in rows if lo <= row.r <= hi]
    if any(row.count < 1 for row in used):
        raise ContractViolation("cover counts must be positive")
    xs = [schedule.log_inv_eps(row.r) for row in used]
    ys = [math.log(row.count) for row in used]
    slope, intercept, resid = fit_loglog(xs, ys)
    return DimensionEstimate(slope, intercept, resid, (used[0].r, used[-1].r), len(used), source)


def growth_exponent(rs: Sequence[int], counts: Sequence[int]) -> float:
    """Fitted k in N_r ~ c r^k."""
    return fit_loglog([math.log(r) for r in rs], [math.log(n) for n in counts])[0]


def saturating_order(r_max: int) -> int:
    """Farey order whose sample meets every length-(2r+1) cell for r <= r_max.

    Open cells are bounded by neighbours of denominator sum at most 2(2r+1);
    their mediant has numerator plus denominator at most that, hence
    denominator at most 4r+2.
    """
    return 4 * r_max + 2


def farey_sample(Q: int, track: TrainTrack | None = None) -> list:
    return [slope_to_lamination(s, track) for s in farey_slopes(Q)]


# sampling carried multicurves

def weight_solutions(track: TrainTrack, max_weight: int, limit: int = 10**7) -> np.ndarray:
    """All nonzero integer weight systems with entries in [0, max_weight]."""
    m = np.array(relation_matrix(track), dtype=np.int64)
    e = m.shape[1]
    if (max_weight + 1) ** e > limit:
        raise ContractViolation(f"box [0,{max_weight}]^{e} too large to scan")
    grid = np.indices((max_weight + 1,) * e).reshape(e, -1).T
    ok = np.all(grid @ m.T == 0, axis=1) & np.any(grid > 0, axis=1)
    return grid[ok]


def random_weight_systems(track: TrainTrack, n: int, seed: int, max_weight: int = 8) -> list:
    """``n`` distinct seeded draws of carried integer weight systems."""
    sols = weight_solutions(track, max_weight)
    rng = np.random.default_rng(seed)
    pick = rng.choice(len(sols), size=min(n, len(sols)), replace=False)
    return [dict(zip(track.edge_ids, map(int, sols[i]))) for i in sorted(pick)]


def multicurve_sample(track: TrainTrack, n: int, seed: int, max_weight: int = 8) -> list:
    return [from_multicurve(track, w) for w in random_weight_systems(track, n, seed, max_weight)]


# bound report

@dataclass
class BoundReport:
    track: str
    chi: int
    ceiling: int
    rows: list = field(default_factory=list)  # (r, census, #Z_r or None, bound, better)
    exponent: float | None = None

    @property
    def passed(self) -> bool:
        ok = self.exponent is None or self.exponent <= self.ceiling
        for r, census, z, bound, _ in self.rows:
            if z is not None:
                ok = ok and census <= z <= bound
        return ok


def bound_report(track: TrainTrack, rs: Sequence[int], sample: Sequence[Lamination] | None = None,
                 zipper_rmax: int = 0, cap: int = 200_000, seed: int = 0,
                 jobs: int = 1) -> BoundReport:
    """Census sizes, enumerated #Z_r where feasible, both bounds and the census exponent."""
    from .zippers import zipper_count_table

    if sample is None:
        if set(track.edge_ids) == {"a", "b"}:
            sample = farey_sample(saturating_order(max(rs)), track)
        else:
            sample = multicurve_sample(track, 60, seed)
    census = census_sizes(track, sample, rs, jobs)
    zrows = {row.r: row for row in zipper_count_table(
        track, [r for r in rs if r <= zipper_rmax], cap)}
    from .zippers import Fattening, bound_z_r

    p, q = len(Fattening(track).cusps), len(track.edge_ids)
    rep = BoundReport(track.name, euler_characteristic(track), better_exponent(track))
    for r, n in zip(rs, census):
        z = zrows.get(r)
        rep.rows.append((r, n, z.count if z else None, bound_z_r(p, q, r), z.better if z else None))
    if len(rs) >= 4:
        rep.exponent = growth_exponent(rs, census)
    return rep
