"""Rational polyhedral cones and polyhedra in dimension at most three.

A :class:`Cone` is stored by a canonical generator set (extreme rays of its
pointed part plus +/- a lattice basis of its lineality space) and by the
canonical generator set of its dual, which doubles as the list of facet
normals.  A :class:`Polyhedron` is an H-representation
``<m, normal> >= -offset`` with derived vertices and recession cone.
"""

from fractions import Fraction
from functools import cached_property, cmp_to_key
from itertools import combinations, product
from math import ceil, floor

from ..errors import UnboundedPolyhedronError, UnsupportedRankError
from .linalg import (
    add, det, dot, in_span, integer_kernel, integer_rows, neg, normalize,
    nullspace, primitive, rank, solve, sub,
)

MAX_RANK = 3


def _check_rank(n):
    if n > MAX_RANK:
        raise UnsupportedRankError(f"ambient rank {n} > {MAX_RANK}")


def cone_generators(normals, n):
    """Canonical generators of ``{x : <a, x> >= 0 for a in normals}``.

    Returns ``(extreme_rays, lineality_basis)``; both are sorted tuples of
    primitive integer vectors.
    """
    normals = [a for a in integer_rows(normals) if any(a)]
    lin = integer_kernel(normals, n)
    d = n - len(lin)
    rays = set()
    if d > 0:
        for subset in combinations(normals, d - 1):
            ker = integer_kernel(list(subset) + lin, n)
            if len(ker) != 1:
                continue
            r = ker[0]
            for cand in (r, neg(r)):
                if all(dot(a, cand) >= 0 for a in normals):
                    rays.add(cand)
                    break
    return tuple(sorted(rays)), tuple(lin)


class Cone:
    """Closed rational polyhedral cone ``cone(generators)`` in Q^n."""

    __slots__ = ("ambient_dim", "rays", "lineality", "facet_normals", "__dict__")

    def __init__(self, generators, ambient_dim=None):
        generators = [tuple(g) for g in generators]
        if ambient_dim is None:
            if not generators:
                raise ValueError("ambient_dim required for the zero cone")
            ambient_dim = len(generators[0])
        self.ambient_dim = ambient_dim
        n = ambient_dim
        normals_rays, normals_lin = cone_generators(generators, n)
        self.facet_normals = normals_rays + normals_lin + tuple(neg(l) for l in normals_lin)
        rays, lin = cone_generators(self.facet_normals, n)
        self.rays = rays
        self.lineality = lin

    @classmethod
    def from_inequalities(cls, normals, ambient_dim):
        """Cone ``{x : <a, x> >= 0}`` for the given normals."""
        rays, lin = cone_generators(normals, ambient_dim)
        return cls(list(rays) + list(lin) + [neg(l) for l in lin], ambient_dim)

    @classmethod
    def zero(cls, n):
        return cls([], n)

    @classmethod
    def full(cls, n):
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return cls(basis + [neg(b) for b in basis], n)

    @property
    def generators(self):
        return self.rays + self.lineality + tuple(neg(l) for l in self.lineality)

    @cached_property
    def dim(self):
        return rank(list(self.generators))

    @property
    def is_pointed(self):
        return not self.lineality

    @cached_property
    def span_basis(self):
        return tuple(g for g in _independent(self.generators))

    @cached_property
    def implicit_equalities(self):
        return tuple(u for u in self.facet_normals
                     if all(dot(u, g) == 0 for g in self.generators))

    def contains(self, x):
        return all(dot(u, x) >= 0 for u in self.facet_normals)

    def relint_contains(self, x):
        if not self.contains(x):
            return False
        eqs = set(self.implicit_equalities)
        return all(dot(u, x) > 0 for u in self.facet_normals if u not in eqs)

    def relint_point(self):
        """A deterministic rational point in the relative interior."""
        p = tuple(0 for _ in range(self.ambient_dim))
        for r in self.rays:
            p = add(p, r)
        for k, l in enumerate(self.lineality):
            p = add(p, tuple((k + 2) * x for x in l))
        return p

    def negate(self):
        return Cone([neg(g) for g in self.generators], self.ambient_dim)

    def faces(self):
        """All faces, as cones, including the cone itself and its minimal face."""
        found = {}
        normals = [u for u in self.facet_normals if u not in set(self.implicit_equalities)]
        for k in range(len(normals) + 1):
            for sub_ in combinations(normals, k):
                gens = [g for g in self.generators if all(dot(u, g) == 0 for u in sub_)]
                c = Cone(gens, self.ambient_dim)
                found[c.key()] = c
        return list(found.values())

    def is_face_of(self, other):
        return any(self == f for f in other.faces())

    def key(self):
        return (self.ambient_dim, self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Cone({list(self.generators)!r})"

    def issubset(self, other):
        return all(other.contains(g) for g in self.generators)


def _independent(vectors):
    chosen = []
    for v in vectors:
        if any(v) and not in_span(chosen, v):
            chosen.append(v)
    return chosen


def dual_cone(c):
    """Dual cone ``{m : <m, v> >= 0 for all v in c}``."""
    _check_rank(c.ambient_dim)
    return Cone(list(c.facet_normals), c.ambient_dim)


def orthogonal_complement(c):
    """Lattice basis of ``c^perp`` inside the dual lattice (HNF-canonical)."""
    _check_rank(c.ambient_dim)
    return integer_kernel(list(c.generators), c.ambient_dim)


# --- polyhedra ---------------------------------------------------------------

def _angle_cmp(a, b):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def sort_ccw(points, center=None):
    """Sort 2-d points counterclockwise around ``center`` (default: centroid)."""
    pts = list(points)
    if not pts:
        return pts
    if center is None:
        center = tuple(sum(Fraction(p[i]) for p in pts) / len(pts) for i in range(2))
    return sorted(pts, key=cmp_to_key(lambda p, q: _angle_cmp(sub(p, center), sub(q, center))))


class Polyhedron:
    """``{m : <m, normal> >= -offset}`` with exact derived V-data.

    Normals and offsets may be rational.  The empty set is a legal value.
    """

    def __init__(self, halfspaces, ambient_dim=None):
        hs = []
        for normal, offset in halfspaces:
            hs.append((normalize(tuple(Fraction(x) for x in normal)), normalize((Fraction(offset),))[0]))
        if ambient_dim is None:
            if not hs:
                raise ValueError("ambient_dim required without halfspaces")
            ambient_dim = len(hs[0][0])
        self.ambient_dim = ambient_dim
        self.halfspaces = tuple(hs)

    @classmethod
    def point(cls, x):
        n = len(x)
        hs = []
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            hs.append((e, -Fraction(x[i])))
            hs.append((neg(e), Fraction(x[i])))
        return cls(hs, n)

    @classmethod
    def box(cls, lo, hi):
        n = len(lo)
        hs = []
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            hs.append((e, -Fraction(lo[i])))
            hs.append((neg(e), Fraction(hi[i])))
        return cls(hs, n)

    def value(self, i, x):
        """Slack of halfspace ``i`` at ``x`` (nonnegative iff satisfied)."""
        normal, offset = self.halfspaces[i]
        return dot(normal, x) + offset

    def contains(self, x):
        return all(dot(a, x) + o >= 0 for a, o in self.halfspaces)

    def interior_contains(self, x):
        return all(dot(a, x) + o > 0 for a, o in self.halfspaces if any(a))

    @cached_property
    def recession_cone(self):
        return Cone.from_inequalities([a for a, _ in self.halfspaces], self.ambient_dim)

    @cached_property
    def vertices(self):
        """Points of the minimal faces (the vertices when pointed), sorted."""
        n = self.ambient_dim
        normals = [a for a, _ in self.halfspaces]
        lin = list(self.recession_cone.lineality)
        d = n - len(lin)
        found = set()
        if d == 0:
            origin = tuple(0 for _ in range(n))
            if self.contains(origin):
                found.add(origin)
        for subset in combinations(range(len(self.halfspaces)), d):
            rows = [normals[i] for i in subset] + lin
            rhs = [-self.halfspaces[i][1] for i in subset] + [0] * len(lin)
            x = solve(rows, rhs)
            if x is not None and self.contains(x):
                found.add(normalize(x))
        return tuple(sorted(found))

    @property
    def is_empty(self):
        return not self.vertices

    @cached_property
    def is_bounded(self):
        return not self.is_empty and self.recession_cone.dim == 0

    @cached_property
    def dim(self):
        if self.is_empty:
            return -1
        v0 = self.vertices[0]
        vecs = [sub(v, v0) for v in self.vertices[1:]] + list(self.recession_cone.generators)
        return rank(vecs)

    @cached_property
    def implicit_equalities(self):
        """Indices of halfspaces that hold with equality on the whole set."""
        if self.is_empty:
            return ()
        gens = self.recession_cone.generators
        return tuple(i for i, (a, o) in enumerate(self.halfspaces)
                     if all(dot(a, v) + o == 0 for v in self.vertices)
                     and all(dot(a, g) == 0 for g in gens))

    def relint_contains(self, x):
        if not self.contains(x):
            return False
        eq = set(self.implicit_equalities)
        return all(self.value(i, x) > 0 for i in range(len(self.halfspaces)) if i not in eq)

    def active_at(self, x):
        return tuple(i for i in range(len(self.halfspaces)) if self.value(i, x) == 0)

    def with_equalities(self, indices):
        """The face cut out by turning the given halfspaces into equalities."""
        extra = [(neg(self.halfspaces[i][0]), -self.halfspaces[i][1]) for i in indices]
        return Polyhedron(list(self.halfspaces) + extra, self.ambient_dim)

    def translate(self, t):
        return Polyhedron([(a, o - dot(a, t)) for a, o in self.halfspaces], self.ambient_dim)

    def dilate(self, k):
        return Polyhedron([(a, o * k) for a, o in self.halfspaces], self.ambient_dim)

    @cached_property
    def direction_basis(self):
        """Basis of the linear space parallel to the affine hull."""
        if self.is_empty:
            return ()
        v0 = self.vertices[0]
        vecs = [sub(v, v0) for v in self.vertices[1:]] + list(self.recession_cone.generators)
        return tuple(primitive(v) for v in _independent(vecs))

    def relint_point(self):
        if self.is_empty:
            raise ValueError("empty polyhedron")
        verts = self.vertices
        c = tuple(sum(Fraction(v[i]) for v in verts) / len(verts) for i in range(self.ambient_dim))
        return normalize(add(c, self.recession_cone.relint_point()))

    def faces(self):
        """Nonempty faces (including the polyhedron itself), deduplicated."""
        if self.is_empty:
            return []
        found = {}
        eq = set(self.implicit_equalities)
        others = [i for i in range(len(self.halfspaces)) if i not in eq]
        for k in range(len(others) + 1):
            for subset in combinations(others, k):
                f = self.with_equalities(subset)
                if f.is_empty:
                    continue
                key = (f.vertices, f.recession_cone.key())
                found.setdefault(key, f)
        return sorted(found.values(), key=lambda f: (-f.dim, f.vertices))

    def ordered_vertices(self):
        """Vertices in boundary order (counterclockwise for 2-d polygons)."""
        if self.ambient_dim == 2 and self.dim == 2:
            return sort_ccw(self.vertices)
        return list(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polyhedron) or other.ambient_dim != self.ambient_dim:
            return False
        return self.vertices == other.vertices and self.recession_cone == other.recession_cone

    def __hash__(self):
        return hash((self.vertices, self.recession_cone.key()))

    def __repr__(self):
        if self.is_empty:
            return f"Polyhedron(empty, n={self.ambient_dim})"
        return f"Polyhedron(vertices={[tuple(map(str, v)) for v in self.vertices]})"


def polytope_from_halfspaces(halfspaces, ambient_dim=None):
    p = Polyhedron(halfspaces, ambient_dim)
    _check_rank(p.ambient_dim)
    return p


def lattice_points(p):
    """All integer points of a bounded polyhedron, lexicographically sorted."""
    if p.is_empty:
        return []
    if not p.is_bounded:
        raise UnboundedPolyhedronError("lattice_points needs a bounded polyhedron")
    n = p.ambient_dim
    lo = [floor(min(v[i] for v in p.vertices)) for i in range(n)]
    hi = [ceil(max(v[i] for v in p.vertices)) for i in range(n)]
    return [pt for pt in product(*(range(lo[i], hi[i] + 1) for i in range(n))) if p.contains(pt)]


def volume(p):
    """Euclidean volume of a bounded polyhedron (0 when lower-dimensional)."""
    if p.is_empty:
        return Fraction(0)
    if not p.is_bounded:
        raise UnboundedPolyhedronError("volume needs a bounded polyhedron")
    n = p.ambient_dim
    _check_rank(n)
    if p.dim < n:
        return Fraction(0)
    if n == 1:
        return Fraction(p.vertices[-1][0] - p.vertices[0][0])
    if n == 2:
        return _polygon_area(sort_ccw(p.vertices))
    v0 = p.vertices[0]
    total = Fraction(0)
    for i, (a, o) in enumerate(p.halfspaces):
        facet = [v for v in p.vertices if dot(a, v) + o == 0]
        if len(facet) < 3 or v0 in facet:
            continue
        drop = next(k for k in range(3) if a[k] != 0)
        keep = [k for k in range(3) if k != drop]
        proj = {tuple(v[k] for k in keep): v for v in facet}
        ring = [proj[q] for q in sort_ccw(list(proj))]
        for j in range(1, len(ring) - 1):
            total += abs(Fraction(det([sub(ring[0], v0), sub(ring[j], v0), sub(ring[j + 1], v0)])))
    return total / 6


def _polygon_area(ring):
    s = Fraction(0)
    for i in range(len(ring)):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % len(ring)]
        s += Fraction(x1) * y2 - Fraction(x2) * y1
    return abs(s) / 2


class TangentCone:
    """Cone of feasible directions of a polyhedron at an apex point."""

    def __init__(self, apex, cone):
        self.apex = normalize(tuple(apex))
        self.cone = cone

    def contains(self, x):
        return self.cone.contains(sub(x, self.apex))

    def __eq__(self, other):
        return isinstance(other, TangentCone) and self.apex == other.apex and self.cone == other.cone

    def __hash__(self):
        return hash((self.apex, self.cone))

    def __repr__(self):
        return f"TangentCone(apex={self.apex}, {self.cone!r})"


def tangent_cone(p, x):
    """Tangent cone of ``p`` at ``x``, or ``None`` when ``x`` is not in ``p``."""
    if not p.contains(x):
        return None
    active = [p.halfspaces[i][0] for i in p.active_at(x)]
    return TangentCone(x, Cone.from_inequalities(active, p.ambient_dim))
