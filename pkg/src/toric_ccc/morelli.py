"""Polytope algebra side of equivariant K-theory.

A K-class of ample line bundles maps to the matching integer combination of
indicator functions of moment polytopes.  The image is recognised locally:
at each lattice point the germ must be an integer combination of the dual
cones of the fan.
"""

from dataclasses import dataclass
from itertools import product
from math import ceil, floor

from .bundles import moment_polytope
from .errors import UnboundedPolyhedronError
from .kernel.arrangement import cell_samples
from .kernel.linalg import normalize, solve_integer
from .kernel.polyhedra import Cone, tangent_cone


class ConstructibleFunction:
    """Finite integer combination of indicators of closed rational polyhedra."""

    def __init__(self, terms, ambient_dim):
        self.ambient_dim = ambient_dim
        self.terms = tuple((int(k), p) for k, p in terms if k)

    @classmethod
    def zero(cls, n):
        return cls((), n)

    @classmethod
    def indicator(cls, poly):
        return cls([(1, poly)], poly.ambient_dim)

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        return sum(k for k, p in self.terms if p.contains(x))

    def __add__(self, other):
        return ConstructibleFunction(self.terms + other.terms, self.ambient_dim)

    def __neg__(self):
        return ConstructibleFunction([(-k, p) for k, p in self.terms], self.ambient_dim)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return ConstructibleFunction([(k * c, p) for c, p in self.terms], self.ambient_dim)

    __rmul__ = __mul__

    def hyperplanes(self):
        return [h for _, p in self.terms for h in p.halfspaces]

    def canonical_form(self, extra=()):
        """Values on sample points of the common refinement, sorted by point."""
        pts = cell_samples(self.hyperplanes() + list(extra), self.ambient_dim)
        return tuple((p, self.evaluate(p)) for p in pts)

    def __eq__(self, other):
        if not isinstance(other, ConstructibleFunction) or other.ambient_dim != self.ambient_dim:
            return NotImplemented
        planes = self.hyperplanes() + other.hyperplanes()
        pts = cell_samples(planes, self.ambient_dim)
        return all(self.evaluate(p) == other.evaluate(p) for p in pts)

    __hash__ = None

    def support_box(self):
        polys = [p for _, p in self.terms if not p.is_empty]
        if not polys:
            return None
        if any(not p.is_bounded for p in polys):
            raise UnboundedPolyhedronError("function has an unbounded term")
        n = self.ambient_dim
        lo = [floor(min(v[i] for p in polys for v in p.vertices)) for i in range(n)]
        hi = [ceil(max(v[i] for p in polys for v in p.vertices)) for i in range(n)]
        return lo, hi

    def records(self):
        """``(coefficient, vertex list)`` pairs for display."""
        return [(k, list(p.ordered_vertices())) for k, p in self.terms]

    def __repr__(self):
        return f"ConstructibleFunction({self.records()})"


def i_t(fan, kclass):
    return ConstructibleFunction(
        [(k, moment_polytope(fan, d).polytope) for k, d in kclass.terms], fan.rank)


def evaluate(g, x):
    return g.evaluate(x)


def euler_integral(g):
    """Sum of ``g`` over the lattice."""
    box = g.support_box()
    if box is None:
        return 0
    lo, hi = box
    return sum(g.evaluate(m) for m in product(*(range(a, b + 1) for a, b in zip(lo, hi))))


# --- germs -----------------------------------------------------------------------

class Germ:
    """Germ at ``base_point`` of a combination of cone indicators.

    Cones are stored relative to the base point (apex at the origin).
    """

    def __init__(self, base_point, terms, ambient_dim=None):
        self.base_point = normalize(tuple(base_point))
        self.ambient_dim = ambient_dim if ambient_dim is not None else len(self.base_point)
        merged = {}
        for k, c in terms:
            merged[c] = merged.get(c, 0) + int(k)
        self.terms = tuple(sorted(((k, c) for c, k in merged.items() if k), key=lambda t: t[1].key()))

    def evaluate(self, direction):
        return sum(k for k, c in self.terms if c.contains(direction))

    def key(self):
        return tuple((k, c.key()) for k, c in self.terms)

    def translate(self, t):
        return Germ(tuple(a + b for a, b in zip(self.base_point, t)), self.terms, self.ambient_dim)

    def hyperplanes(self):
        return [(u, 0) for _, c in self.terms for u in c.facet_normals]

    def __eq__(self, other):
        if not isinstance(other, Germ) or self.base_point != other.base_point:
            return NotImplemented
        pts = cell_samples(self.hyperplanes() + other.hyperplanes(), self.ambient_dim)
        return all(self.evaluate(p) == other.evaluate(p) for p in pts)

    __hash__ = None

    def __repr__(self):
        return f"Germ(at={self.base_point}, {[(k, list(c.generators)) for k, c in self.terms]})"


def germ_at(g, m):
    terms = []
    for k, p in g.terms:
        tc = tangent_cone(p, m)
        if tc is not None:
            terms.append((k, tc.cone))
    return Germ(m, terms, g.ambient_dim)


@dataclass(frozen=True)
class GermCertificate:
    """The germ equals ``sum coeff * 1_{dual(cone)}``; cones are ray-index sets."""

    expression: tuple

    def evaluate(self, fan, direction):
        return sum(k for k, cone in self.expression if fan.dual(cone).contains(direction))


def germ_in_S_sigma(germ, fan):
    """Certificate that the germ is an integer combination of dual cones, or None."""
    cache = fan.__dict__.setdefault("_germ_certs", {})
    key = germ.key()
    if key not in cache:
        cache[key] = _certify(germ, fan)
    return cache[key]


def _certify(germ, fan):
    duals = {c: fan.dual(c) for c in fan.all_cones}
    cones = list(fan.all_cones)
    planes = germ.hyperplanes() + [(u, 0) for c in cones for u in duals[c].facet_normals]
    pts = cell_samples(planes, fan.rank)
    matrix = [[1 if duals[c].contains(p) else 0 for c in cones] for p in pts]
    rhs = [germ.evaluate(p) for p in pts]
    x = solve_integer(matrix, rhs)
    if x is None:
        return None
    return GermCertificate(tuple((k, c) for k, c in zip(x, cones) if k))


def morelli_image_check(fan, g, margin=1):
    """Certify every lattice germ of ``g`` in its support box fattened by ``margin``.

    Returns ``(ok, failures)`` with ``failures`` the lattice points whose germ
    has no certificate.
    """
    box = g.support_box()
    if box is None:
        return True, []
    lo, hi = box
    failures = []
    for m in product(*(range(a - margin, b + margin + 1) for a, b in zip(lo, hi))):
        if germ_in_S_sigma(germ_at(g, m), fan) is None:
            failures.append(m)
    return not failures, failures


def half_open_halfplane_germ():
    """``1_{y > 0}`` near the origin of the plane, written with closed cones."""
    upper = Cone.from_inequalities([(0, 1)], 2)
    axis = Cone.from_inequalities([(0, 1), (0, -1)], 2)
    return Germ((0, 0), [(1, upper), (-1, axis)], 2)
