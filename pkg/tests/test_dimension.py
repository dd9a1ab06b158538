import math

import numpy as np
import pytest

from geolam.dimension import (
    CoverRow,
    ScaleSchedule,
    bound_report,
    census_sizes,
    cover_counts,
    estimate_dimension,
    farey_sample,
    growth_exponent,
    multicurve_sample,
    random_weight_systems,
    saturating_order,
)
from geolam.errors import ContractViolation
from geolam.torus import Slope, slope_to_lamination
from geolam.zippers import census_realized_families


def synthetic(schedule, c=1.0, k=2.0):
    return [CoverRow(r, schedule.eps(r), max(1, round(c * r**k)), 0.0) for r in schedule.rs]


def test_schedule_validation():
    with pytest.raises(ContractViolation):
        ScaleSchedule.exponential([3, 2, 5])
    with pytest.raises(ContractViolation):
        ScaleSchedule.exponential([1, 2], b=0)
    with pytest.raises(ContractViolation):
        ScaleSchedule("linear", (1, 2))
    s = ScaleSchedule.exponential([1, 2, 3], a=2.0, b=0.5)
    assert s.eps(2) == pytest.approx(2 * math.exp(-1))
    assert s.log_inv_eps(800) == pytest.approx(400 - math.log(2))


def test_exponential_estimate_of_quadratic_growth():
    s = ScaleSchedule.exponential(range(100, 201, 10))
    est = estimate_dimension(synthetic(s), s)
    assert 0 < est.slope <= 0.06
    # analytic slope of 2 log r against r over the top half
    assert est.slope == pytest.approx(2 / 175, rel=0.05)


def test_reciprocal_estimate_of_quadratic_growth():
    s = ScaleSchedule.reciprocal(range(50, 201, 10))
    est = estimate_dimension(synthetic(s, c=1.0, k=2.0), s)
    assert est.slope == pytest.approx(2.0, abs=1e-3)


def test_b_scales_estimate():
    rows_b1 = synthetic(ScaleSchedule.exponential(range(10, 60, 5), b=1.0))
    s2 = ScaleSchedule.exponential(range(10, 60, 5), b=2.5)
    e1 = estimate_dimension(rows_b1, ScaleSchedule.exponential(range(10, 60, 5), b=1.0))
    e2 = estimate_dimension(rows_b1, s2)
    assert e2.slope == pytest.approx(e1.slope / 2.5)


def test_needs_four_scales():
    s = ScaleSchedule.reciprocal([1, 2, 3])
    with pytest.raises(ContractViolation):
        estimate_dimension(synthetic(s), s, window="all")


def test_single_lamination_cover(torus):
    s = ScaleSchedule.exponential([1, 2, 3, 4])
    rows = cover_counts(torus, [slope_to_lamination(Slope(2, 7), torus)], s)
    assert [r.count for r in rows] == [1, 1, 1, 1]


def test_fast_census_matches_generic(torus):
    sample = farey_sample(25, torus)
    rs = [1, 2, 4, 7, 11]
    fast = census_sizes(torus, sample, rs)
    slow = [census_realized_families(torus, sample, r).size for r in rs]
    assert fast == slow
    # a shuffled sample is not consecutive and goes through the generic path
    shuffled = sample[::2] + sample[1::2]
    assert census_sizes(torus, shuffled, rs) == fast


def test_saturation(torus):
    r = 30
    q = saturating_order(r)
    assert census_sizes(torus, farey_sample(q, torus), [r]) == \
        census_sizes(torus, farey_sample(q + 25, torus), [r])


def test_torus_census_growth(torus):
    rs = list(range(20, 81, 10))
    counts = census_sizes(torus, farey_sample(saturating_order(80), torus), rs)
    assert counts == sorted(counts)
    assert 1.6 <= growth_exponent(rs, counts) <= 2.4


def test_weight_sampler_is_seeded(sphere4):
    a = random_weight_systems(sphere4, 10, seed=5)
    b = random_weight_systems(sphere4, 10, seed=5)
    assert a == b and len(a) == 10
    assert len({tuple(w.values()) for w in a}) == 10


@pytest.mark.parametrize("name", ["sphere4", "genus2"])
def test_bound_report_higher_genus(name):
    from geolam.assets import load_asset

    t = load_asset(name)
    rep = bound_report(t, [1, 2, 3, 4, 5], zipper_rmax=2, seed=1)
    assert rep.ceiling == 17
    assert rep.passed
    for r, census, z, bound, _ in rep.rows:
        if z is not None:
            assert census <= z <= bound


def test_bound_report_torus(torus):
    rep = bound_report(torus, list(range(20, 61, 10)))
    assert rep.ceiling == 8 and rep.passed
    assert rep.exponent == pytest.approx(2.0, abs=0.4)


def test_multicurve_sample_lives_on_track(genus2):
    sample = multicurve_sample(genus2, 12, seed=2)
    assert all(lam.track == genus2 for lam in sample)


def test_estimate_window_range():
    s = ScaleSchedule.reciprocal(range(10, 101, 10))
    est = estimate_dimension(synthetic(s), s, window=(30, 80))
    assert est.r_range == (30, 80) and est.n_scales == 6
    assert np.isfinite(est.residual)
