from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import det2, surface_intersection_form
from toric_ccc.bundles import anticanonical, positivity
from toric_ccc.errors import InvalidFanError, NotCoveredError, UnknownFanError, UnsupportedFanError
from toric_ccc.fans import (
    LIBRARY_NAMES, SURFACE_NAMES, build_fan, ccw_order, classify, cone_containing,
    library_fan, surface_self_intersections,
)
from toric_ccc.kernel.linalg import add, scale


def test_projective_plane_has_seven_cones():
    fan = build_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    assert len(fan.all_cones) == 7
    assert frozenset() in fan.all_cones


def test_hirzebruch_surface_has_nine_cones():
    fan = build_fan([(1, 0), (0, 1), (-1, -1), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert len(fan.all_cones) == 9


def test_overlapping_cones_are_rejected_with_the_pair():
    with pytest.raises(InvalidFanError) as exc:
        build_fan([(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    assert exc.value.pair == (0, 1)


@pytest.mark.parametrize("name", ["P2", "F2"])
def test_library_surfaces_are_smooth_complete(name):
    flags = classify(library_fan(name))
    assert flags.smooth and flags.complete and flags.simplicial


def test_single_quadrant_is_not_complete():
    flags = classify(build_fan([(1, 0), (0, 1)], [(0, 1)]))
    assert flags.smooth and flags.simplicial and not flags.complete
    assert flags.failed_test


def test_singular_cone_is_not_smooth():
    fan = build_fan([(1, 0), (1, 2)], [(0, 1)])
    flags = classify(fan)
    assert flags.simplicial and not flags.smooth


@pytest.mark.parametrize("name", LIBRARY_NAMES)
def test_every_library_fan_is_smooth_complete_simplicial(name):
    flags = classify(library_fan(name))
    assert (flags.smooth, flags.complete, flags.simplicial) == (True, True, True)


def test_library_ray_data():
    assert (-1, -3) in library_fan("F3").rays
    assert library_fan("P1").rays == ((1,), (-1,))
    b3 = library_fan("B3")
    assert len(b3.rays) == 6 and len(b3.max_cones) == 6
    assert library_fan("B1") == library_fan("F1")
    with pytest.raises(UnknownFanError):
        library_fan("Q7")


def test_cone_containing():
    p2 = library_fan("P2")
    assert cone_containing(p2, (1, 1)) == frozenset({0, 1})
    assert cone_containing(p2, (1, 0)) == frozenset({0})
    assert cone_containing(p2, (0, 0)) == frozenset()
    f2 = library_fan("F2")
    # (-1,-1) = (0,1) + (-1,-2), so it sits inside that 2-cone
    assert cone_containing(f2, (-1, -1)) == frozenset({1, 2})


def test_cone_containing_outside_support():
    quadrant = build_fan([(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(NotCoveredError):
        cone_containing(quadrant, (-1, 0))


@given(st.sampled_from(SURFACE_NAMES), st.integers(-9, 9), st.integers(-9, 9),
       st.integers(1, 7))
def test_cone_containing_is_the_smallest_cone(name, a, b, q):
    fan = library_fan(name)
    x = (Fraction(a, q), Fraction(b, q))
    c = cone_containing(fan, x)
    assert fan.cone(c).contains(x)
    assert fan.cone(c).relint_contains(x)
    for other in fan.all_cones:
        if other < c:
            assert not fan.cone(other).contains(x)


@pytest.mark.parametrize("m", range(6))
def test_hirzebruch_self_intersections(m):
    table = surface_self_intersections(library_fan(f"F{m}"))
    assert table == {0: 0, 1: m, 2: 0, 3: -m}


def test_projective_plane_and_quadric_self_intersections():
    assert set(surface_self_intersections(library_fan("P2")).values()) == {1}
    assert set(surface_self_intersections(library_fan("F0")).values()) == {0}


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_self_intersections_satisfy_cyclic_relation(name):
    fan = library_fan(name)
    order = ccw_order(fan)
    table = surface_self_intersections(fan)
    rays = [fan.rays[i] for i in order]
    oracle = surface_intersection_form(rays)
    for pos, i in enumerate(order):
        a = -table[i]
        assert add(rays[pos - 1], rays[(pos + 1) % len(rays)]) == scale(a, rays[pos])
        assert table[i] == oracle[pos][pos]
        assert det2(rays[pos], rays[(pos + 1) % len(rays)]) == 1


def test_self_intersections_need_a_surface():
    with pytest.raises(UnsupportedFanError):
        surface_self_intersections(library_fan("P1"))


def test_anticanonical_positivity_on_library():
    ample = {n for n in LIBRARY_NAMES if n != "P3" and positivity(library_fan(n), anticanonical(library_fan(n))).ample}
    assert ample == {"P1", "P2", "F0", "F1", "B1", "B2", "B3"}
    f2 = positivity(library_fan("F2"), anticanonical(library_fan("F2")))
    assert f2.nef and not f2.ample
    assert not positivity(library_fan("F3"), anticanonical(library_fan("F3"))).nef
