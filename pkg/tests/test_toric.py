from fractions import Fraction

import pytest

from delpezzo.catalog import entry_by_name, build_entry_ladder
from delpezzo.graphs import isomorphic
from delpezzo.multiplet import contracted_graph
from delpezzo.toric import (
    Fan2D,
    FanError,
    anticanonical_square,
    exceptional_graph,
    gorenstein_index,
    hirzebruch_fan,
    hj_resolve,
    family_fan,
)


def test_fan_validation():
    with pytest.raises(FanError):
        Fan2D(((2, 0), (0, 1), (-1, -1)))  # non-primitive
    with pytest.raises(FanError):
        Fan2D(((1, 0), (-1, -1), (0, 1)))  # wrong cyclic order
    with pytest.raises(FanError):
        Fan2D(((1, 0), (0, 1)))  # not complete
    with pytest.raises(FanError):
        Fan2D(((1, 0), (0, 1), (1, 0)))  # repeated ray


def test_smooth_fan_has_no_insertions():
    p2 = Fan2D(((1, 0), (0, 1), (-1, -1)))
    res = hj_resolve(p2)
    assert res.inserted_rays() == ()
    assert p2.is_smooth()


def test_hirzebruch_fan_convention():
    # the section ray gets square -n, the opposite one +n, fibers 0
    for n in (0, 1, 2, 5):
        fan = hirzebruch_fan(n)
        assert fan.is_smooth()
        si = hj_resolve(fan).self_intersections()
        assert si[(0, 1)] == -n
        assert si[(0, -1)] == n
        assert si[(1, 0)] == 0
        assert si[(-1, n)] == 0
        assert anticanonical_square(fan) == 8


@pytest.mark.parametrize("a", range(2, 11))
def test_family_one_resolution(a):
    res = hj_resolve(family_fan("I", a))
    assert res.inserted_rays() == ((0, -1),)
    d = res.discrepancies[(0, -1)]
    assert d == Fraction(-(a - 1), a)
    assert -a * d == a - 1
    assert res.self_intersections()[(0, -1)] == -2 * a


def test_weighted_plane_resolution():
    fan = family_fan("O", 4)
    res = hj_resolve(fan)
    assert res.inserted_rays() == ((0, -1),)
    assert res.discrepancies[(0, -1)] == Fraction(-3, 4)
    assert anticanonical_square(fan) == Fraction(25, 2)


def test_du_val_chain_walk():
    # the cone over (1,0), (1,5) is a chain of four (-2)-curves; the other
    # three cones of this fan are already smooth
    fan = Fan2D(((1, 0), (1, 5), (0, 1), (-1, -1)))
    res = hj_resolve(fan)
    assert res.inserted_rays() == ((1, 1), (1, 2), (1, 3), (1, 4))
    si = res.self_intersections()
    for r in res.inserted_rays():
        assert si[r] == -2
        assert res.discrepancies[r] == 0
    assert gorenstein_index(fan) == 1


@pytest.mark.parametrize("a", range(2, 11))
def test_family_volumes(a):
    assert anticanonical_square(family_fan("O", a)) == Fraction(2 * a * a + 4 * a + 2, a)
    assert anticanonical_square(family_fan("I", a)) == Fraction(2 * a * a + 3 * a + 2, a)
    assert anticanonical_square(family_fan("II1", a)) == Fraction(2 * a * a + 2 * a + 2, a)
    assert anticanonical_square(family_fan("II2", a)) == Fraction(2 * a * a + 2 * a + 2, a)


def test_small_plane_quotient_volume():
    assert anticanonical_square(family_fan("P113", 3)) == Fraction(25, 3)
    assert gorenstein_index(family_fan("P113", 3)) == 3


@pytest.mark.parametrize("a", range(2, 11))
def test_family_indices(a):
    for family in ("O", "I", "II1", "II2"):
        assert gorenstein_index(family_fan(family, a)) == a


def test_index_equals_smallest_discrepancy_clearing():
    for family in ("O", "I", "II1", "II2"):
        for a in (2, 3, 4, 7):
            fan = family_fan(family, a)
            res = hj_resolve(fan)
            idx = gorenstein_index(fan)
            discs = list(res.discrepancies.values())
            for aa in range(1, idx):
                assert any((aa * d).denominator != 1 for d in discs)
            assert all((idx * d).denominator == 1 for d in discs)


def test_gorenstein_index_of_specific_cones():
    assert gorenstein_index(family_fan("O", 5)) == 5
    assert gorenstein_index(Fan2D(((1, 0), (0, 1), (-1, -1)))) == 1
    assert gorenstein_index(family_fan("II2", 4)) == 4


def test_resolution_minimality():
    for family, a in (("O", 4), ("I", 5), ("II1", 3), ("II2", 6)):
        res = hj_resolve(family_fan(family, a))
        for d in res.discrepancies.values():
            assert Fraction(-1) < d <= 0
        rays = list(res.fan.rays)
        for r in res.inserted_rays():
            restricted = tuple(v for v in rays if v != r)
            assert not Fan2D(restricted).is_smooth()


@pytest.mark.parametrize("a", range(2, 11))
def test_exceptional_graphs_match_multiplet_descent(a):
    for family, entry_name in (("I", "I"), ("II1", "II_1"), ("II2", "II_2"), ("O", "O")):
        toric_side = exceptional_graph(family_fan(family, a), a)
        pair = build_entry_ladder(entry_by_name(a, entry_name), a, 0).bottom_pair()
        assert isomorphic(toric_side, contracted_graph(pair)), (family, a)


def test_resolution_report_shape():
    rep = hj_resolve(family_fan("I", 4)).report_json(4)
    assert rep["inserted"] == [[0, -1]]
    assert rep["discrepancies"] == ["-3/4"]
    assert rep["relative_anticanonical_coefficients"] == ["3"]
    assert rep["index"] == 4
    assert rep["volume"] == "23/2"


def test_fan_json_round_trip():
    fan = family_fan("II2", 5)
    assert Fan2D.from_json(fan.to_json()) == fan
