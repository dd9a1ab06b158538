import pytest

from geolam.assets import BUNDLED, load_asset
from geolam.dimension import random_weight_systems
from geolam.errors import ContractViolation, EnumerationLimitError
from geolam.lamination import from_multicurve
from geolam.torus import Slope, farey_slopes, slope_to_lamination
from geolam.track import euler_characteristic
from geolam.zippers import (
    Fattening,
    ZipperFamily,
    bound_z_r,
    better_exponent,
    census_realized_families,
    cusps,
    enumerate_zipper_families,
    format_family,
    parse_family,
    pathset_from_zippers,
    zipper_count_table,
    zippers_from_lamination,
)
from oracles import brute_zipper_families

# counts from the brute-force chord simulator in oracles.py (torus r=5 took ~9 min)
BRUTE_COUNTS = {
    "torus": {1: 5, 2: 11, 3: 20, 4: 30, 5: 44},
    "sphere4": {1: 15, 2: 39},
    "genus2": {1: 74},
}
# enumerator only, beyond the simulator's reach
ENUM_COUNTS = {("torus", 6): 61, ("sphere4", 3): 74, ("genus2", 2): 446}


@pytest.mark.parametrize("name", BUNDLED)
def test_cusp_count_bound(name):
    t = load_asset(name)
    p = len(cusps(t))
    assert p == t.total_cusps()
    assert p <= 6 * abs(euler_characteristic(t))


def test_trigon_cusps(trigon):
    (disc,) = [r for r in trigon.regions if r.kind == "disc"]
    assert len(disc.cusps) == 3
    assert len(cusps(trigon)) == trigon.total_cusps() == 4


def test_torus_channels(torus):
    fat = Fattening(torus)
    assert [s for s in fat.slots["s"] if s[0] == "ch"] == [("ch", 0, 0), ("ch", 1, 0), ("ch", 1, 1)]


@pytest.mark.parametrize("name,r", [(n, r) for n, rs in BRUTE_COUNTS.items() for r in rs
                                    if (n, r) != ("torus", 5)])
def test_enumeration_matches_brute_force(name, r):
    t = load_asset(name)
    fams = set(enumerate_zipper_families(t, r))
    assert len(fams) == BRUTE_COUNTS[name][r]
    assert fams == brute_zipper_families(t, r)


@pytest.mark.parametrize("key,count", sorted(ENUM_COUNTS.items()))
def test_frozen_enumerator_counts(key, count):
    name, r = key
    assert len(enumerate_zipper_families(load_asset(name), r)) == count


def test_torus_r5_count(torus):
    assert len(enumerate_zipper_families(torus, 5)) == BRUTE_COUNTS["torus"][5]


@pytest.mark.parametrize("name,r", [("torus", 4), ("sphere4", 2), ("genus2", 2)])
def test_family_invariants(name, r):
    t = load_asset(name)
    fat = Fattening(t)
    p = len(fat.cusps)
    for z in enumerate_zipper_families(t, r):
        assert sum(z.crossing_counts(t).values()) <= p * r
        owners = []
        for arc in z.arcs:
            if arc.kind == "plain":
                assert arc.crossings == r and arc.end is None
                owners.append(arc.root)
            else:
                assert arc.crossings <= 2 * r and arc.end != arc.root
                assert z.arc_for(arc.end) is arc  # both cusps share the arc
                owners += [arc.root, arc.end]
            assert t.is_legal(arc.route)
        assert sorted(owners) == list(range(p))
        keys = [k for segs in z.layout for k in segs]
        assert len(keys) == len(set(keys))


def test_counts_nondecreasing(torus):
    counts = [row.count for row in zipper_count_table(torus, range(1, 7))]
    assert counts == sorted(counts)


@pytest.mark.parametrize("name,rmax", [("torus", 6), ("sphere4", 3), ("genus2", 2)])
def test_counting_bounds(name, rmax):
    t = load_asset(name)
    p, q = len(cusps(t)), len(t.edge_ids)
    rows = zipper_count_table(t, range(1, rmax + 1))
    k = better_exponent(t)
    c = rows[0].count
    for row in rows:
        assert row.count <= bound_z_r(p, q, row.r)
        assert row.count <= c * row.r ** k


def test_normal_form_round_trip(sphere4):
    for z in enumerate_zipper_families(sphere4, 2):
        assert parse_family(sphere4, format_family(sphere4, z)) == z


def test_cap(genus2):
    with pytest.raises(EnumerationLimitError) as err:
        enumerate_zipper_families(genus2, 2, cap=50)
    assert err.value.partial == 51


def test_slope_one_at_radius_two(torus):
    lam = slope_to_lamination(Slope(1, 1), torus)
    z = zippers_from_lamination(torus, lam, 2)
    assert z in set(enumerate_zipper_families(torus, 2))
    res = pathset_from_zippers(torus, z, 2)
    assert res.paths == lam.realized_paths(5) and not res.flagged


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_c_of_a_is_b_on_torus(torus, r):
    fams = set(enumerate_zipper_families(torus, r))
    images = {pathset_from_zippers(torus, z, r).paths for z in fams}
    for s in farey_slopes(15):
        if s.p == 0:
            continue
        lam = slope_to_lamination(s, torus)
        z = zippers_from_lamination(torus, lam, r)
        assert z in fams
        assert pathset_from_zippers(torus, z, r).paths == lam.realized_paths(2 * r + 1)
        assert lam.realized_paths(2 * r + 1) in images  # c is onto the sampled families


@pytest.mark.parametrize("name", ["sphere4", "genus2"])
def test_c_of_a_is_b_on_multicurves(name):
    t = load_asset(name)
    fams = set(enumerate_zipper_families(t, 1))
    checked = 0
    for w in random_weight_systems(t, 80, seed=11, max_weight=5):
        if 0 in w.values():
            continue
        lam = from_multicurve(t, w)
        try:
            z = zippers_from_lamination(t, lam, 1)
        except ContractViolation:
            continue  # turns outside the chosen fattening
        assert z in fams
        assert pathset_from_zippers(t, z, 1).paths == lam.realized_paths(3)
        checked += 1
    assert checked >= 5


def test_a_needs_every_edge_crossed(torus):
    with pytest.raises(ContractViolation):
        zippers_from_lamination(torus, slope_to_lamination(Slope(0, 1), torus), 2)


def test_uncarried_multicurve_rejected(genus2):
    w = {"a": 1, "b": 3, "c": 3, "d": 1}  # turns c -> c, excluded by the channels
    with pytest.raises(ContractViolation, match="outside the fattening"):
        zippers_from_lamination(genus2, from_multicurve(genus2, w), 1)


@pytest.mark.parametrize("name,r", [("torus", 3), ("sphere4", 2), ("genus2", 1)])
def test_every_gap_extends_uniquely(name, r):
    t = load_asset(name)
    for z in enumerate_zipper_families(t, r):
        assert pathset_from_zippers(t, z, r).flagged == []


def test_incomplete_family_is_flagged(torus):
    empty = ZipperFamily((), ((), ()))
    res = pathset_from_zippers(torus, empty, 1)
    # edge a meets two channels at each end; edge b meets one
    assert res.flagged == [("a", 0, "ambiguous")]
    assert len(res.paths) == 2


def test_census_basics(torus):
    one = census_realized_families(torus, [slope_to_lamination(Slope(1, 2), torus)], 3)
    assert one.size == 1
    sizes = [census_realized_families(torus, [slope_to_lamination(s, torus)
                                              for s in farey_slopes(q)], 3).size
             for q in range(1, 20)]
    assert sizes == sorted(sizes)
    assert sizes[-1] == sizes[-5]  # saturated
    assert sizes[-1] <= 20  # #Z_3


def test_census_mixed_backends(torus):
    sample = [slope_to_lamination(Slope(1, 2), torus), from_multicurve(torus, {"a": 2, "b": 1}),
              from_multicurve(torus, {"a": 3, "b": 1})]
    cen = census_realized_families(torus, sample, 2)
    assert cen.size == 2
    assert len(cen.families()) == 2


def test_census_rejects_foreign_track(torus, sphere4):
    with pytest.raises(ContractViolation):
        census_realized_families(torus, [from_multicurve(sphere4, {e: 1 for e in "abcd"})], 1)
