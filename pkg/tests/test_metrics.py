import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geolam.errors import ContractViolation
from geolam.lamination import ExplicitLanguage, from_multicurve
from geolam.metrics import (
    CRITICAL_POINT,
    CRITICAL_VALUE,
    check_triangle_dlog,
    check_ultrametric,
    critical_point_numeric,
    d_log_transform,
    d_theta,
    h_margin,
    lipschitz_window,
    model_hausdorff,
)
from geolam.torus import Slope, farey_slopes, slope_to_lamination
from geolam.track import parse_path
from oracles import mechanical_factors


def lam(torus, p, q):
    return slope_to_lamination(Slope(p, q), torus)


def test_zero_and_one_are_at_distance_one(torus):
    d = d_theta(lam(torus, 0, 1), lam(torus, 1, 1), 64)
    assert d.value == 1 and d.depth == 0
    assert d.witness == parse_path("b-")


def test_half_and_third(torus):
    d = d_theta(lam(torus, 1, 2), lam(torus, 1, 3), 64)
    assert d.value == Fraction(1, 3) and d.depth == 2
    assert d.witness == parse_path("a- a- a-")
    assert not d.capped


def test_identical_slopes(torus):
    d = d_theta(lam(torus, 2, 5), lam(torus, 2, 5), 64)
    assert d.value == 0 and not d.capped


def test_same_language_other_backend_is_capped(torus):
    d = d_theta(lam(torus, 2, 5), from_multicurve(torus, {"a": 5, "b": 2}), 30)
    assert d.value == 0 and d.capped


@pytest.mark.parametrize("pair", [((1, 2), (2, 5)), ((1, 4), (1, 5)), ((3, 7), (4, 9))])
def test_d_theta_matches_first_factor_disagreement(torus, pair):
    (p1, q1), (p2, q2) = pair
    first = next(n for n in range(1, 100)
                 if mechanical_factors(Fraction(p1, q1), n) != mechanical_factors(Fraction(p2, q2), n))
    assert d_theta(lam(torus, p1, q1), lam(torus, p2, q2), 99).value == Fraction(1, first)


def test_rmax_validation(torus):
    with pytest.raises(ContractViolation):
        d_theta(lam(torus, 1, 2), lam(torus, 1, 3), 0)


def test_ultrametric_on_small_farey(torus):
    pts = [slope_to_lamination(s, torus) for s in farey_slopes(7)]
    rep = check_ultrametric(pts, 32)
    assert rep.passed and rep.n_triples == len(pts) * (len(pts) - 1) * (len(pts) - 2) // 6


def test_injected_fault_is_detected(torus):
    P = parse_path
    # x, y agree at lengths 1 and 3, y, z only at 2, x, z nowhere
    x = ExplicitLanguage(torus, {1: [P("a+")], 2: [P("a+ a+")], 3: [P("a+ a+ a+")],
                                 4: [P("a+ a+ a+ a+")]})
    y = ExplicitLanguage(torus, {1: [P("a+")], 2: [P("a+ b+")], 3: [P("a+ a+ a+")],
                                 4: [P("a+ a+ a+ b+")]})
    z = ExplicitLanguage(torus, {1: [P("a+"), P("b+")], 2: [P("a+ b+")], 3: [P("a+ a+ b+")],
                                 4: [P("a+ a+ b+ b+")]})
    rep = check_ultrametric([x, y, z], 4)
    assert not rep.passed
    (i, j, k, dij, djk, dik) = rep.violations[0]
    assert (dij, djk, dik) == (Fraction(1, 4), Fraction(1, 3), Fraction(1))


def test_d_log_values():
    assert d_log_transform(0) == 0
    assert d_log_transform(0.5) == pytest.approx(1 / math.log(4))
    assert d_log_transform(math.exp(-3)) == pytest.approx(1 / 3)
    with pytest.raises(ContractViolation):
        d_log_transform(-1e-3)


def test_critical_point():
    assert critical_point_numeric() == pytest.approx(CRITICAL_POINT, abs=1e-12)
    assert h_margin(CRITICAL_POINT, CRITICAL_POINT) == pytest.approx(CRITICAL_VALUE, abs=1e-12)


def test_triangle_grid_small():
    rep = check_triangle_dlog(grid_size=200)
    assert rep.passed
    assert rep.boundary_max_abs < 1e-15


def test_triangle_rejects_bad_samples():
    with pytest.raises(ContractViolation):
        check_triangle_dlog([(0.1, 0.1, 0.3)], grid_size=10)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.25), st.floats(0, 0.25))
def test_subadditivity(u, v):
    assert h_margin(u, v) >= -1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-2, 1.0), st.floats(0.05, 5.0))
def test_lipschitz_window(d, b):
    lo, hi = lipschitz_window(b)
    ratio = d_log_transform(math.exp(-b / d)) / d
    assert lo - 1e-9 <= ratio <= hi + 1e-9


def test_model_hausdorff(torus):
    x, y = lam(torus, 1, 2), lam(torus, 1, 3)
    assert model_hausdorff(x, y, 1.0, 64) == pytest.approx(math.exp(-3))
    assert model_hausdorff(x, x, 1.0, 64) == 0.0
    with pytest.raises(ContractViolation):
        model_hausdorff(x, y, 0.0, 64)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 30)), min_size=3, max_size=8))
def test_ultrametric_random_rationals(pairs):
    from geolam.assets import load_asset

    torus = load_asset("torus")
    pts = [slope_to_lamination(Slope.rational(p, q), torus) for p, q in pairs]
    assert check_ultrametric(pts, 80).passed
