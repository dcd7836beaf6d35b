from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_lattice_points, interval_relative_betti, planar_relative_euler, shoelace
from toric_ccc.errors import UnboundedPolyhedronError, UnsupportedRankError
from toric_ccc.fans import LIBRARY_NAMES, library_fan
from toric_ccc.kernel import (
    Cone, PlanarCellComplex, Polyhedron, dual_cone, euler, lattice_points,
    orthogonal_complement, polytope_from_halfspaces, relative_pair_cohomology,
    tangent_cone, volume,
)
from toric_ccc.kernel.linalg import dot, integer_kernel, smith_invariants, solve_integer

F1_HALFSPACES = [((1, 0), 0), ((0, 1), 0), ((-1, -1), 2), ((0, -1), 1)]


def interval(a, b):
    return Polyhedron.box((a,), (b,))


# --- cones ---------------------------------------------------------------------

def test_dual_of_quadrant_is_itself():
    q = Cone([(1, 0), (0, 1)])
    assert dual_cone(q) == q


def test_dual_of_ray_is_halfplane():
    d = dual_cone(Cone([(1, 0)], 2))
    assert set(d.generators) == {(1, 0), (0, 1), (0, -1)}
    assert d.contains((0, 5)) and not d.contains((-1, 0))


def test_dual_of_hirzebruch_cone():
    assert dual_cone(Cone([(0, 1), (-1, -2)])) == Cone([(-1, 0), (-2, 1)])


def test_dual_cone_rank_cap():
    with pytest.raises(UnsupportedRankError):
        dual_cone(Cone([(1, 0, 0, 0)], 4))


def test_orthogonal_complements():
    assert orthogonal_complement(Cone([(1, 0)], 2)) == [(0, 1)]
    assert orthogonal_complement(Cone([(1, 0), (0, 1)])) == []
    assert orthogonal_complement(Cone([(1, -2)], 2)) == [(2, 1)]


@pytest.mark.parametrize("name", LIBRARY_NAMES)
def test_dual_is_involution_on_library_cones(name):
    fan = library_fan(name)
    for c in fan.max_cones:
        cone = fan.cone(c)
        assert dual_cone(dual_cone(cone)) == cone


@pytest.mark.parametrize("name", LIBRARY_NAMES)
def test_perp_dimension_and_orthogonality(name):
    fan = library_fan(name)
    for c in fan.all_cones:
        cone = fan.cone(c)
        basis = orthogonal_complement(cone)
        assert cone.dim + len(basis) == fan.rank
        assert all(dot(b, v) == 0 for b in basis for v in cone.generators)


def test_dual_membership_against_sampled_points():
    cone = Cone([(0, 1), (-1, -2)])
    dual = dual_cone(cone)
    for m in product(range(-4, 5), repeat=2):
        expected = all(dot(m, v) >= 0 for v in cone.generators)
        assert dual.contains(m) == expected


# --- polyhedra -----------------------------------------------------------------

def test_hirzebruch_polytope_vertices():
    p = polytope_from_halfspaces(F1_HALFSPACES)
    assert set(p.vertices) == {(0, 0), (0, 1), (1, 1), (2, 0)}


def test_projective_plane_triangle():
    p = polytope_from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)])
    assert set(p.vertices) == {(0, 0), (1, 0), (0, 1)}
    assert len(lattice_points(p)) == 3
    assert volume(p) == Fraction(1, 2)


def test_contradictory_halfspaces_give_empty_polyhedron():
    p = polytope_from_halfspaces([((1,), -1), ((-1,), 0)])
    assert p.is_empty
    assert lattice_points(p) == []
    assert volume(p) == 0


def test_lattice_points_of_hirzebruch_polytope():
    p = polytope_from_halfspaces(F1_HALFSPACES)
    assert lattice_points(p) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]
    assert lattice_points(p) == brute_lattice_points(F1_HALFSPACES, (-3, -3), (3, 3))


def test_volume_of_hirzebruch_polytope():
    p = polytope_from_halfspaces(F1_HALFSPACES)
    assert volume(p) == Fraction(3, 2) == shoelace(p.ordered_vertices())
    # twice the area is the self-intersection of 2 D3 + D4 on F1
    assert 2 * volume(p) == 3


def test_point_polytope_has_zero_volume():
    assert volume(Polyhedron.point((1, 2))) == 0


def test_unbounded_inputs_raise():
    half = polytope_from_halfspaces([((1, 0), 0)])
    with pytest.raises(UnboundedPolyhedronError):
        lattice_points(half)
    with pytest.raises(UnboundedPolyhedronError):
        volume(half)


def test_tangent_cones():
    p = polytope_from_halfspaces(F1_HALFSPACES)
    assert tangent_cone(p, (2, 0)).cone == Cone([(-1, 0), (-1, 1)])
    inner = tangent_cone(p, (Fraction(1, 2), Fraction(1, 3)))
    assert inner.cone == Cone.full(2)
    assert tangent_cone(p, (5, 5)) is None


def test_three_dimensional_volume():
    simplex = polytope_from_halfspaces(
        [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((-1, -1, -1), 1)])
    assert volume(simplex) == Fraction(1, 6)
    assert volume(Polyhedron.box((0, 0, 0), (2, 1, 3))) == 6


small = st.integers(-3, 3)


@st.composite
def lattice_polygons(draw):
    """Random full-dimensional lattice polygons, as boxes cut by one extra halfplane."""
    x0, y0 = draw(small), draw(small)
    w, h = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    hs = [((1, 0), -x0), ((-1, 0), x0 + w), ((0, 1), -y0), ((0, -1), y0 + h)]
    a, b = draw(st.integers(-2, 2)), draw(st.integers(-2, 2))
    if (a, b) != (0, 0):
        # keep the corner (x0, y0) strictly inside the cut
        hs.append(((a, b), -(a * x0 + b * y0) + 1))
    return polytope_from_halfspaces(hs)


@given(lattice_polygons())
def test_vertices_satisfy_all_halfspaces(p):
    for v in p.vertices:
        assert all(dot(a, v) + o >= 0 for a, o in p.halfspaces)
        assert sum(dot(a, v) + o == 0 for a, o in p.halfspaces) >= p.dim


@given(lattice_polygons())
def test_lattice_points_match_exhaustive_box(p):
    assert lattice_points(p) == brute_lattice_points(p.halfspaces, (-8, -8), (8, 8))


@given(lattice_polygons(), small, small, st.sampled_from([2, 3]))
def test_volume_translation_and_dilation(p, dx, dy, k):
    v = volume(p)
    assert volume(p.translate((dx, dy))) == v
    assert volume(p.dilate(k)) == k ** 2 * v
    assert v == shoelace(p.ordered_vertices())


# --- relative cohomology ---------------------------------------------------------

def test_relative_cohomology_examples():
    assert relative_pair_cohomology(interval(0, 1), interval(-1, 2)) == [1, 0]
    assert relative_pair_cohomology(interval(0, 3), interval(1, 2)) == [0, 1]
    square = Polyhedron.box((0, 0), (1, 1))
    assert relative_pair_cohomology(square, square) == [1, 0, 0]


@given(st.integers(-4, 4), st.integers(1, 4), st.integers(-4, 4), st.integers(1, 4))
def test_interval_relative_cohomology_oracle(a, w, c, v):
    got = relative_pair_cohomology(interval(a, a + w), interval(c, c + v))
    assert got == interval_relative_betti((a, a + w), (c, c + v))


def _grid_model(poly, shrink):
    center = poly.relint_point()

    def inside(x):
        # closed copy of the interior, pulled toward an interior point
        y = tuple(c + (xi - c) / (1 - shrink) for xi, c in zip(x, center))
        return poly.contains(y)
    return inside


@settings(max_examples=12)
@given(lattice_polygons(), st.integers(-2, 2), st.integers(-2, 2),
       st.integers(1, 3), st.integers(1, 3))
def test_relative_euler_matches_cell_counting(p, x, y, w, h):
    v = Polyhedron.box((x, y), (x + w, y + h))
    betti = relative_pair_cohomology(p, v)
    lo = tuple(Fraction(t) - Fraction(1, 3) for t in (min(q[0] for q in p.vertices),
                                                      min(q[1] for q in p.vertices)))
    hi = tuple(t + 5 for t in lo)
    chi = planar_relative_euler(
        _grid_model(p, Fraction(1, 50)), v.interior_contains, lo, hi,
        Fraction(1, 10), PlanarCellComplex.from_region)
    assert euler(betti) == chi


def test_planar_cell_complex_counts():
    annulus = PlanarCellComplex.from_region(
        lambda q: max(abs(q[0]), abs(q[1])) <= 2 and max(abs(q[0]), abs(q[1])) >= 1,
        (-3, -3), (3, 3), Fraction(1, 2))
    assert annulus.betti() == [1, 1]
    assert annulus.euler_characteristic() == 0


# --- lattice linear algebra --------------------------------------------------------

def test_integer_kernel_and_smith():
    assert integer_kernel([(1, -2)], 2) == [(2, 1)]
    assert smith_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert solve_integer([(2, 0), (0, 3)], [4, 9]) == (2, 3)
    assert solve_integer([(2, 0)], [3]) is None
