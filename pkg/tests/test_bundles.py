import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from oracles import brute_lattice_points, p1_line_bundle, riemann_roch_surface
from toric_ccc.bundles import (
    KClass, TDivisor, cartier_data, cohomology, graded_hom, moment_polytope,
    nef_h0_count, positivity, weight_cohomology,
)
from toric_ccc.errors import NotAmpleError
from toric_ccc.fans import SURFACE_NAMES, Fan, ccw_order, library_fan
from toric_ccc.kernel import lattice_points

P1 = library_fan("P1")
P2 = library_fan("P2")
F1 = library_fan("F1")


def test_cartier_data_examples():
    data = cartier_data(P1, TDivisor((0, 1)))
    assert data[frozenset({0})] == (0,)
    assert data[frozenset({1})] == (1,)
    assert set(cartier_data(P2, TDivisor((0, 0, 1))).values()) == {(0, 0), (1, 0), (0, 1)}
    assert set(cartier_data(F1, TDivisor((0, 0, 0, 0))).values()) == {(0, 0)}


@pytest.mark.parametrize("m", range(4))
def test_ampleness_inequality_on_random_hirzebruch_divisors(m):
    fan = library_fan(f"F{m}")
    rng = random.Random(m)
    for _ in range(60):
        c = [rng.randint(-5, 5) for _ in range(4)]
        expected = c[1] + c[3] > 0 and c[0] + c[2] > m * c[3]
        assert positivity(fan, TDivisor(c)).ample == expected


def test_positivity_examples():
    f2 = positivity(library_fan("F2"), TDivisor((1, 1, 1, 1)))
    assert f2.nef and not f2.ample
    zero = positivity(P2, TDivisor((0, 0, 0)))
    assert zero.nef and not zero.ample


def test_moment_polytope_examples():
    mp = moment_polytope(F1, TDivisor((0, 0, 2, 1)))
    assert set(mp.polytope.vertices) == {(0, 0), (0, 1), (1, 1), (2, 0)}
    assert mp.face(frozenset({1, 2})).vertices == ((2, 0),)
    seg = moment_polytope(P1, TDivisor((2, 3))).polytope
    assert seg.vertices == ((-2,), (3,))


@given(st.integers(0, 3), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_hirzebruch_vertex_formula(m, c1, c2, c3, c4):
    fan = library_fan(f"F{m}")
    d = TDivisor((c1, c2, c3, c4))
    if not positivity(fan, d).ample:
        return
    expected = {(-c1, -c2), (c3 + m * c2, -c2), (c3 - m * c4, c4), (-c1, c4)}
    assert set(moment_polytope(fan, d).polytope.vertices) == expected


@given(st.sampled_from(SURFACE_NAMES), st.data())
def test_face_map_is_a_dimension_bijection_for_ample(name, data):
    fan = library_fan(name)
    c = data.draw(st.lists(st.integers(0, 3), min_size=len(fan.rays), max_size=len(fan.rays)))
    d = TDivisor(c)
    if not positivity(fan, d).ample:
        return
    mp = moment_polytope(fan, d)
    faces = [mp.face(c) for c in fan.all_cones]
    assert len(set(faces)) == len(fan.all_cones)
    for cone, face in zip(fan.all_cones, faces):
        assert face.dim == fan.rank - fan.cone_dim(cone)


def test_weight_cohomology_examples():
    d = TDivisor((-2, 0))
    assert weight_cohomology(P1, d, (1,)) == [0, 1]
    assert weight_cohomology(P1, d, (0,)) == [0, 0]
    assert weight_cohomology(F1, TDivisor((0, 0, 0, 0)), (0, 0)) == [1, 0, 0]


def test_cohomology_examples():
    p2 = cohomology(P2, TDivisor((0, 0, 1)))
    assert p2.total_dims == [3, 0, 0] and p2.euler == 3
    neg = cohomology(P1, TDivisor((-2, 0)))
    assert neg.total_dims == [0, 1] and neg.euler == -1
    f1 = cohomology(F1, TDivisor((0, 0, 2, 1)))
    assert f1.total_dims == [5, 0, 0] and f1.euler == 5


@pytest.mark.parametrize("k", range(-7, 8))
def test_projective_line_against_classical_values(k):
    h = cohomology(P1, TDivisor((0, k)))
    assert tuple(h.total_dims) == p1_line_bundle(k)


@pytest.mark.parametrize("k", range(1, 7))
def test_serre_type_symmetry_on_projective_line(k):
    assert cohomology(P1, TDivisor((0, -k))).total_dims[1] == cohomology(P1, TDivisor((0, k - 2))).total_dims[0]


@given(st.sampled_from(SURFACE_NAMES), st.data())
def test_euler_characteristic_is_riemann_roch(name, data):
    fan = library_fan(name)
    c = data.draw(st.lists(st.integers(-3, 3), min_size=len(fan.rays), max_size=len(fan.rays)))
    order = ccw_order(fan)
    rays = [fan.rays[i] for i in order]
    assert cohomology(fan, TDivisor(c)).euler == riemann_roch_surface(rays, [c[i] for i in order])


@given(st.sampled_from(SURFACE_NAMES + ("P1",)), st.data())
def test_demazure_vanishing(name, data):
    fan = library_fan(name)
    c = data.draw(st.lists(st.integers(-2, 3), min_size=len(fan.rays), max_size=len(fan.rays)))
    d = TDivisor(c)
    if not positivity(fan, d).nef:
        return
    h = cohomology(fan, d)
    assert all(x == 0 for x in h.total_dims[1:])
    hs = [(v, k) for v, k in zip(fan.rays, c)]
    assert h.total_dims[0] == nef_h0_count(fan, d) == len(brute_lattice_points(hs, [-12] * fan.rank, [12] * fan.rank))


def test_graded_hom_examples():
    up = graded_hom(P1, TDivisor((0, 1)), TDivisor((0, 3)))
    assert up.total_dims == [3, 0]
    assert up.weights() == [(0,), (1,), (2,)]
    down = graded_hom(P1, TDivisor((0, 3)), TDivisor((0, 1)))
    assert down.total_dims == [0, 1]
    same = graded_hom(F1, TDivisor((1, 1, 1, 1)), TDivisor((1, 1, 1, 1)))
    assert same.table == {(0, 0): (1, 0, 0)}


def test_weights_outside_the_box_vanish():
    d = TDivisor((1, -2, 3, -1))
    fan = library_fan("F1")
    h = cohomology(fan, d)
    us = list(cartier_data(fan, d).values())
    lo = [min(u[i] for u in us) - 1 for i in range(2)]
    hi = [max(u[i] for u in us) + 1 for i in range(2)]
    for m in product(range(lo[0] - 3, hi[0] + 4), range(lo[1] - 3, hi[1] + 4)):
        if not all(a <= x <= b for x, a, b in zip(m, lo, hi)):
            assert weight_cohomology(fan, d, m) == [0, 0, 0]
            assert h.at(m) == [0, 0, 0]


def test_cohomology_independent_of_cone_order():
    fan = library_fan("F2")
    shuffled = Fan(fan.rays, list(reversed(fan.max_cones)))
    for c in [(1, -3, 0, 2), (0, 0, -4, 0), (2, 1, 1, 1)]:
        assert cohomology(fan, TDivisor(c)).table == cohomology(shuffled, TDivisor(c)).table


def test_kclass_euler_is_additive():
    a, b = TDivisor((0, 0, 1)), TDivisor((0, 0, 2))
    k = KClass(P2, [(1, a), (1, b)])
    assert k.euler() == cohomology(P2, a).euler + cohomology(P2, b).euler
    assert (KClass(P2, [(1, a)]) + KClass(P2, [(1, b)])) == k
    assert (k - k).terms == ()


def test_kclass_rejects_non_ample_terms():
    with pytest.raises(NotAmpleError):
        KClass(P2, [(1, TDivisor((0, 0, 0)))])


def test_lattice_point_count_equals_nef_h0():
    assert nef_h0_count(F1, TDivisor((0, 0, 2, 1))) == len(lattice_points(moment_polytope(F1, TDivisor((0, 0, 2, 1))).polytope)) == 5
