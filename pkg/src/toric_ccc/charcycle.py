"""Characteristic cycles of polyhedral sheaves and their intersection pairing.

Conventions, fixed once:

* A cell is ``(closed base face, closed fiber cone, multiplicity)`` and stands
  for ``relint(base) x fiber``.  Two cycles are equal when their multiplicity
  densities agree at generic points of every base stratum.
* The multiplicity at ``x`` in ``relint F`` and generic ``xi`` in a conormal
  chamber is ``chi(B) - chi(B ∩ {<y - x, xi> < 0})`` for a small open cube
  ``B`` about ``x``, where ``chi(W)`` is the Euler characteristic of the
  sheaf's sections over ``W``, times ``(-1)^shift``.  Closed and open
  constant sheaves get inward conormals, extensions by zero get outward ones.
* The pairing pushes the first cycle off the zero section along
  ``eps * grad(phi) + eta`` with ``phi`` the log barrier of its open base and
  ``eta`` a small generic covector, and counts intersection points with the
  second cycle, each weighted by the product of multiplicities.  The limit
  ``eps -> 0`` is taken exactly.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor

from ._parallel import pmap
from .bundles import moment_polytope, is_ample
from .errors import (
    DegenerateInputError, NotAmpleError, ToleranceInstabilityError,
    UnsupportedCycleError, UnsupportedRankError,
)
from .kernel.arrangement import cell_samples, _fill
from .kernel.linalg import add, dot, neg, primitive, solve, sub
from .kernel.polyhedra import Cone, Polyhedron, sort_ccw, tangent_cone
from .kernel.topology import euler, feasible, relative_pair_cohomology

MODES = ("costandard-open", "standard-open", "closed-constant")


@dataclass(frozen=True)
class PolyhedralSheaf:
    polytope: Polyhedron
    mode: str
    shift: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.polytope.is_empty:
            raise ValueError("polytope is empty")


def kappa_sheaf(fan, d):
    """The costandard sheaf attached to an ample divisor, shifted by the rank."""
    if not is_ample(fan, d):
        raise NotAmpleError(f"{list(d.coeffs)} is not ample")
    return PolyhedralSheaf(moment_polytope(fan, d).polytope, "costandard-open", fan.rank)


# --- cycles -----------------------------------------------------------------------

@dataclass(frozen=True)
class CycleCell:
    base: Polyhedron
    fiber: Cone
    mult: int

    @property
    def base_dim(self):
        return self.base.dim


def _check_cell(cell):
    n = cell.base.ambient_dim
    if cell.base.is_empty:
        raise ValueError("empty cell base")
    if cell.base.dim + cell.fiber.dim != n:
        raise ValueError("cell is not Lagrangian: dimensions do not add up")
    if any(dot(d, g) for d in cell.base.direction_basis for g in cell.fiber.generators):
        raise ValueError("fiber is not conormal to the base")


class CycleWithMultiplicity:
    def __init__(self, cells, ambient_dim):
        self.ambient_dim = ambient_dim
        merged = {}
        for c in cells:
            if not c.mult:
                continue
            _check_cell(c)
            key = (c.base, c.fiber)
            merged[key] = merged.get(key, 0) + c.mult
        self.cells = tuple(CycleCell(b, f, k) for (b, f), k in merged.items() if k)

    @classmethod
    def empty(cls, n):
        return cls((), n)

    def __bool__(self):
        return bool(self.cells)

    def __add__(self, other):
        _same_ambient(self, other)
        return CycleWithMultiplicity(self.cells + other.cells, self.ambient_dim)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return CycleWithMultiplicity(
            [CycleCell(c.base, c.fiber, k * c.mult) for c in self.cells], self.ambient_dim)

    __mul__ = scale
    __rmul__ = scale

    def translate(self, m):
        return CycleWithMultiplicity(
            [CycleCell(c.base.translate(m), c.fiber, c.mult) for c in self.cells], self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, CycleWithMultiplicity):
            return NotImplemented
        _same_ambient(self, other)
        return _densities_agree(self.cells, other.cells, self.ambient_dim)

    __hash__ = None

    def records(self):
        """``(base vertices, base directions, fiber generators, multiplicity)`` tuples."""
        out = []
        for c in self.cells:
            out.append((list(c.base.ordered_vertices()), list(c.base.direction_basis),
                        list(c.fiber.generators), c.mult))
        return sorted(out, key=repr)

    def __repr__(self):
        return f"CycleWithMultiplicity({self.records()})"


def _same_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("cycles live over different ambient spaces")


def verdier_flip(c):
    """Negate every fiber; bases and multiplicities are kept."""
    return CycleWithMultiplicity(
        [CycleCell(x.base, x.fiber.negate(), x.mult) for x in c.cells], c.ambient_dim)


# --- density comparison -----------------------------------------------------------

def _hull_key(base):
    n, d = base.ambient_dim, base.dim
    if d == n:
        return ("top",)
    if d == 0:
        return ("point", base.vertices[0])
    t = base.direction_basis[0]
    normal = primitive((-t[1], t[0]))
    if next(x for x in normal if x) < 0:
        normal = neg(normal)
    return ("line", normal, dot(normal, base.vertices[0]))


def _directions(normals, n):
    """Generic directions, one or more in every chamber of a central arrangement."""
    if n == 1:
        return [(1,), (-1,)]
    lines = [(a, 0) for a in normals if any(a)]
    pts = [p for p in cell_samples(lines, 2)
           if any(p) and all(dot(a, p) != 0 for a, _ in lines)]
    return pts or [(1, 0)]


def _group_samples(key, cells, n):
    """``(x, xi)`` pairs generic for the stratum ``key``."""
    if key[0] == "top":
        planes = [h for c in cells for h in c.base.halfspaces if any(h[0])]
        zero = (0,) * n
        return [(x, zero) for x in cell_samples(planes, n)
                if all(dot(a, x) + o != 0 for a, o in planes)]
    if key[0] == "point":
        normals = [u for c in cells for u in c.fiber.facet_normals]
        return [(key[1], xi) for xi in _directions(normals, n)]
    _, normal, value = key
    t = (-normal[1], normal[0])
    q = tuple(Fraction(value * x, dot(normal, normal)) for x in normal)
    params = {dot(sub(v, q), t) / Fraction(dot(t, t)) for c in cells for v in c.base.vertices}
    fill = [s for s in _fill(params) if s not in params]
    return [(add(q, tuple(s * x for x in t)), xi) for s in fill for xi in (normal, neg(normal))]


def _density(cells, x, xi):
    return sum(c.mult for c in cells if c.base.relint_contains(x) and c.fiber.contains(xi))


def _group(cells):
    groups = {}
    for c in cells:
        groups.setdefault(_hull_key(c.base), []).append(c)
    return groups


def _densities_agree(cells_a, cells_b, n, window=None):
    ga, gb = _group(cells_a), _group(cells_b)
    for key in set(ga) | set(gb):
        a, b = ga.get(key, []), gb.get(key, [])
        for x, xi in _group_samples(key, a + b, n):
            if window is not None and not window(x):
                continue
            if _density(a, x, xi) != _density(b, x, xi):
                return False
    return True


def _base_box(cells, n):
    verts = [v for c in cells for v in c.base.vertices]
    lo = [floor(min(v[i] for v in verts)) for i in range(n)]
    hi = [ceil(max(v[i] for v in verts)) for i in range(n)]
    return lo, hi


def periodize(c):
    """Lattice translates of ``c`` meeting the closed unit cube."""
    n = c.ambient_dim
    if not c:
        return c
    lo, hi = _base_box(c.cells, n)
    shifts = product(*(range(-b, 2 - a) for a, b in zip(lo, hi)))
    cells = [CycleCell(x.base.translate(m), x.fiber, x.mult) for m in shifts for x in c.cells]
    return CycleWithMultiplicity(cells, n)


def periodic_equal(a, b):
    """Equality of the images of two cycles in the cotangent bundle of the torus."""
    _same_ambient(a, b)
    n = a.ambient_dim
    pa, pb = periodize(a), periodize(b)
    return _densities_agree(pa.cells, pb.cells, n,
                            window=lambda x: all(0 <= t < 1 for t in x))


# --- characteristic cycles --------------------------------------------------------

def _fiber_chambers(poly, face, x):
    """Maximal chambers of the conormal space of ``face`` at ``x``."""
    n = poly.ambient_dim
    dirs = face.direction_basis
    if len(dirs) == n:
        return [Cone.zero(n)]
    if n == 1:
        return [Cone([(1,)]), Cone([(-1,)])]
    if len(dirs) == 1:
        g = primitive((-dirs[0][1], dirs[0][0]))
        return [Cone([g]), Cone([neg(g)])]
    edges = tangent_cone(poly, x).cone.generators
    if not edges:
        return [Cone.full(2)]
    lines = sorted({_canonical_line(e) for e in edges})
    if len(lines) == 1:
        g = lines[0]
        return [Cone.from_inequalities([g], 2), Cone.from_inequalities([neg(g)], 2)]
    rays = sort_ccw([r for g in lines for r in ((-g[1], g[0]), (g[1], -g[0]))], (0, 0))
    return [Cone([rays[i], rays[(i + 1) % len(rays)]]) for i in range(len(rays))]


def _canonical_line(e):
    e = primitive(e)
    return e if next(v for v in e if v) > 0 else neg(e)


def _cube(x, h):
    return Polyhedron.box([t - h for t in x], [t + h for t in x])


def _start(poly):
    if poly.ambient_dim == 2:
        return sort_ccw(poly.vertices)
    return list(poly.vertices)


def _sections_euler(sheaf, region):
    """Euler characteristic of sections over the open convex set ``int(region)``."""
    p = sheaf.polytope
    if sheaf.mode == "costandard-open":
        return euler(relative_pair_cohomology(region, p))
    if region.is_empty or region.dim < region.ambient_dim:
        return 0
    strict = [h for h in region.halfspaces if any(h[0])]
    own = [h for h in p.halfspaces]
    if sheaf.mode == "closed-constant":
        return int(feasible(_start(region), strict, own))
    if p.dim < p.ambient_dim:
        return 0
    return int(feasible(_start(region), strict + [h for h in own if any(h[0])]))


def _local_multiplicity(sheaf, x, xi, h):
    cube = _cube(x, h)
    whole = _sections_euler(sheaf, cube)
    if not any(xi):
        below = 0
    else:
        below = _sections_euler(
            sheaf, Polyhedron(list(cube.halfspaces) + [(neg(xi), dot(x, xi))], cube.ambient_dim))
    return whole - below


_LOCAL_CACHE = {}


def _stable_multiplicity(sheaf, x, xi, attempts=8):
    """Local multiplicity, computed on the tangent cone at ``x``.

    Inside a small enough cube the sheaf agrees with the same kind of sheaf on
    the tangent cone, so the computation moves to the origin and is cached
    per cone.  Cubes are halved until two successive sizes agree.
    """
    p = sheaf.polytope
    active = tuple(sorted((a, p.value(i, x)) for i, (a, _) in enumerate(p.halfspaces)
                          if any(a) and p.value(i, x) == 0))
    key = (sheaf.mode, p.ambient_dim, active, tuple(xi))
    if key not in _LOCAL_CACHE:
        cone = PolyhedralSheaf(Polyhedron(active or [((0,) * p.ambient_dim, 0)], p.ambient_dim),
                               sheaf.mode, 0)
        origin = (0,) * p.ambient_dim
        h = Fraction(1)
        prev = _local_multiplicity(cone, origin, xi, h)
        for _ in range(attempts):
            h /= 2
            cur = _local_multiplicity(cone, origin, xi, h)
            if cur == prev:
                break
            prev = cur
        else:
            raise ToleranceInstabilityError("local Morse multiplicity did not stabilise")
        _LOCAL_CACHE[key] = cur
    return _LOCAL_CACHE[key] * (-1) ** sheaf.shift


_CC_CACHE = {}


def characteristic_cycle(sheaf):
    """Cells ``(face, conormal chamber, multiplicity)`` over the faces of the polytope."""
    key = (sheaf.polytope, sheaf.mode)
    if key not in _CC_CACHE:
        _CC_CACHE[key] = _characteristic_cycle(PolyhedralSheaf(sheaf.polytope, sheaf.mode, 0))
    return _CC_CACHE[key].scale((-1) ** sheaf.shift)


def _characteristic_cycle(sheaf):
    p = sheaf.polytope
    n = p.ambient_dim
    if n > 2:
        raise UnsupportedRankError("characteristic cycles are implemented for n <= 2")
    if not p.is_bounded:
        raise ValueError("polytope must be bounded")
    jobs = []
    for face in p.faces():
        x = face.relint_point()
        for chamber in _fiber_chambers(p, face, x):
            jobs.append((face, chamber, x, chamber.relint_point()))
    mults = pmap(lambda j: _stable_multiplicity(sheaf, j[2], j[3]), jobs)
    return CycleWithMultiplicity(
        [CycleCell(f, c, k) for (f, c, _, _), k in zip(jobs, mults) if k], n)


# --- intersection pairing ---------------------------------------------------------

class _Degenerate(Exception):
    pass


def _etas(n, count=12):
    for k in range(count):
        a = Fraction(97 + 13 * k, 89)
        b = Fraction(-(41 + 7 * k), 103)
        yield ((a if k % 2 == 0 else -a),) if n == 1 else (a, b) if k % 2 == 0 else (b, a)


def _costandard_pieces(c):
    """``[(weight, open base)]`` with ``c`` equal to the matching sum of flipped CCs."""
    n = c.ambient_dim
    pieces = [(x.mult, x.base) for x in c.cells if x.base.dim == n]
    expected = CycleWithMultiplicity.empty(n)
    for w, base in pieces:
        expected = expected + verdier_flip(
            characteristic_cycle(PolyhedralSheaf(base, "costandard-open", 0))).scale(w)
    if expected != c:
        raise UnsupportedCycleError(
            "first cycle is not a combination of flipped costandard characteristic cycles")
    return pieces


class _Barrier:
    """Exact ``eps -> 0`` data of ``eps * grad(phi_U) + eta`` for one open polytope."""

    def __init__(self, u, eta):
        self.u = u
        self.eta = eta
        self.facets = [(a, o) for a, o in u.halfspaces if any(a)]
        v = u.vertices
        self.box = ([min(x[i] for x in v) for i in range(u.ambient_dim)],
                    [max(x[i] for x in v) for i in range(u.ambient_dim)])
        self._zero = None

    def _active(self, x):
        return sorted({(a, o) for a, o in self.facets if dot(a, x) + o == 0})

    def zero_crossing(self):
        """``(v, w)``: the graph meets the zero section at ``v + eps * w``."""
        if self._zero is None:
            vals = sorted((dot(self.eta, v), v) for v in self.u.vertices)
            if len(vals) > 1 and vals[0][0] == vals[1][0]:
                raise _Degenerate()
            v = vals[0][1]
            active = self._active(v)
            n = self.u.ambient_dim
            if len(active) != n:
                raise UnsupportedCycleError("open base has a non-simple vertex")
            normals = [a for a, _ in active]
            lam = solve([list(col) for col in zip(*normals)], list(self.eta))
            if lam is None or any(t <= 0 for t in lam):
                raise _Degenerate()
            w = solve(normals, [1 / t for t in lam])
            self._zero = (v, w)
        return self._zero

    def chord(self, q, t):
        lo, hi = None, None
        for a, o in self.facets:
            c0, c1 = dot(a, q) + o, dot(a, t)
            if c1 == 0:
                if c0 <= 0:
                    return None
                continue
            s = Fraction(-c0) / c1
            if c1 > 0:
                lo = s if lo is None else max(lo, s)
            else:
                hi = s if hi is None else min(hi, s)
        if lo is None or hi is None or lo >= hi:
            return None
        return lo, hi


def _meets_vertex(bar, cell, m):
    x = add(cell.base.vertices[0], m)
    if not bar.u.interior_contains(x):
        return False
    if cell.fiber.relint_contains(bar.eta):
        return True
    if cell.fiber.contains(bar.eta):
        raise _Degenerate()
    return False


def _meets_zero(bar, cell, m):
    v, w = bar.zero_crossing()
    y = sub(v, m)
    for a, o in cell.base.halfspaces:
        s = dot(a, y) + o
        if s < 0:
            return False
        if s == 0:
            slope = dot(a, w)
            if slope == 0:
                raise _Degenerate()
            if slope < 0:
                return False
    return True


def _edge_data(cell):
    base = cell.base
    q = base.vertices[0]
    t = base.direction_basis[0]
    tt = Fraction(dot(t, t))
    ends = sorted(dot(sub(v, q), t) / tt for v in base.vertices)
    return q, t, ends[0], ends[-1]


def _meets_edge(bar, cell, m, data):
    q0, t, f_lo, f_hi = data
    q = add(q0, m)
    span = bar.chord(q, t)
    if span is None:
        return False
    et = dot(bar.eta, t)
    if et == 0:
        raise _Degenerate()
    forward = et > 0
    s_e = span[0] if forward else span[1]
    if not (f_lo <= s_e < f_hi if forward else f_lo < s_e <= f_hi):
        return False
    u = t if forward else neg(t)
    e = add(q, tuple(s_e * x for x in t))
    active = bar._active(e)
    eu = dot(bar.eta, u)
    k = len(active)
    p = bar.eta
    for a, _ in active:
        p = sub(p, tuple(Fraction(eu, k) * x / dot(u, a) for x in a))
    if not any(p):
        raise _Degenerate()
    return dot(p, cell.fiber.rays[0]) > 0


def _local_count(bar, cells, m):
    total = 0
    n = bar.u.ambient_dim
    ulo, uhi = bar.box
    for cell, lo, hi, data in cells:
        # every hit lies in the closure of both bases
        if any(a + t > u or b + t < l for a, b, t, l, u in zip(lo, hi, m, ulo, uhi)):
            continue
        d = cell.base.dim
        if d == 0:
            hit = _meets_vertex(bar, cell, m)
        elif d == n:
            hit = _meets_zero(bar, cell, m)
        else:
            hit = _meets_edge(bar, cell, m, data)
        if hit:
            total += cell.mult
    return total


def _boxed(cells, n):
    out = []
    for c in cells:
        v = c.base.vertices
        data = _edge_data(c) if 0 < c.base.dim < n else None
        out.append((c, [min(x[i] for x in v) for i in range(n)],
                    [max(x[i] for x in v) for i in range(n)], data))
    return out


def _translates(u, cells, n, periodic):
    if not periodic:
        return [(0,) * n]
    ulo, uhi = _base_box([CycleCell(u, Cone.zero(n), 1)], n)
    clo, chi = _base_box(cells, n)
    return list(product(*(range(a - d - 1, b - c + 2)
                          for a, b, c, d in zip(ulo, uhi, clo, chi))))


def _pairing_with(pieces, cells, eta, n, periodic):
    total = 0
    for w, u in pieces:
        bar = _Barrier(u, eta)
        boxed = _boxed(cells, n)
        total += w * sum(_local_count(bar, boxed, m) for m in _translates(u, cells, n, periodic))
    return total


def dk_pairing(c1, c2, periodic=True):
    """Intersection number of ``c1`` pushed off by a generic barrier graph with ``c2``.

    ``c1`` must be a combination of flipped characteristic cycles of
    costandard sheaves.  With ``periodic`` the count runs over all lattice
    translates of ``c2``, which gives the Euler characteristic of the full
    weight-graded hom; without it only weight zero is counted.
    """
    _same_ambient(c1, c2)
    n = c1.ambient_dim
    if n > 2:
        raise UnsupportedRankError("the pairing is implemented for n <= 2")
    if not c1 or not c2:
        return 0
    pieces = _costandard_pieces(c1)
    values = []
    for eta in _etas(n):
        try:
            values.append(_pairing_with(pieces, c2.cells, eta, n, periodic))
        except _Degenerate:
            continue
        if len(values) == 2:
            break
    if len(values) < 2:
        raise DegenerateInputError("no two admissible perturbations were found")
    if values[0] != values[1]:
        raise DegenerateInputError(
            f"perturbations disagree ({values[0]} vs {values[1]}); input is not generic enough")
    return values[0]
