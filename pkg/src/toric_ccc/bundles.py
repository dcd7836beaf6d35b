"""Equivariant line bundles on smooth complete toric varieties.

Cohomology is computed one character at a time with the Čech complex of the
affine cover by maximal-cone charts.  At weight ``m`` the chart of a cone
``tau`` carries the character ``m`` iff ``<m, v> >= -c_v`` on every ray of
``tau``, so the cochains live on the simplices of the cover's nerve whose
intersection cone avoids the "negative" rays.  That set of rays is all that
matters, so results are cached per negative-ray set.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import ceil, floor

from ._parallel import pmap
from .errors import BoundingRegionError, NotAmpleError, ToricError, UnsupportedFanError
from .fans import classify
from .kernel.linalg import dot, rank, solve
from .kernel.polyhedra import Polyhedron, lattice_points


@dataclass(frozen=True)
class TDivisor:
    coeffs: tuple

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    def __add__(self, other):
        _same_length(self, other)
        return TDivisor(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        _same_length(self, other)
        return TDivisor(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return TDivisor(-a for a in self.coeffs)

    def __mul__(self, k):
        return TDivisor(k * a for a in self.coeffs)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)


def _same_length(a, b):
    if len(a.coeffs) != len(b.coeffs):
        raise ValueError("divisors on different fans")


def anticanonical(fan):
    return TDivisor([1] * len(fan.rays))


def _check_divisor(fan, d):
    if len(d.coeffs) != len(fan.rays):
        raise ValueError(f"divisor has {len(d.coeffs)} coefficients, fan has {len(fan.rays)} rays")


def _require_smooth_complete(fan):
    flags = classify(fan)
    if not (flags.smooth and flags.complete):
        raise UnsupportedFanError("a smooth complete fan is required")


# --- support function data ------------------------------------------------------

def cartier_data(fan, d):
    """``{maximal cone: u}`` with ``<u, v_i> = -c_i`` on the cone's rays."""
    _check_divisor(fan, d)
    _require_smooth_complete(fan)
    return _cartier(fan, d)


def _cartier(fan, d):
    out = {}
    for cone in fan.max_cones:
        idx = sorted(cone)
        u = solve([fan.rays[i] for i in idx], [-d.coeffs[i] for i in idx])
        if u is None or any(x.denominator != 1 for x in u):
            raise ToricError(f"no integral linearisation on cone {idx}")
        out[cone] = tuple(int(x) for x in u)
    return out


@dataclass(frozen=True)
class Positivity:
    ample: bool
    nef: bool


def positivity(fan, d):
    data = cartier_data(fan, d)
    nef = ample = True
    for cone, u in data.items():
        for j, v in enumerate(fan.rays):
            if j in cone:
                continue
            s = dot(u, v) + d.coeffs[j]
            if s < 0:
                nef = ample = False
            elif s == 0:
                ample = False
    return Positivity(ample=ample, nef=nef)


def is_ample(fan, d):
    return positivity(fan, d).ample


# --- moment polytopes -------------------------------------------------------------

@dataclass(frozen=True)
class MomentPolytope:
    polytope: Polyhedron
    faces: dict = field(hash=False, compare=False)

    def face(self, cone):
        return self.faces[frozenset(cone)]


def moment_polytope(fan, d):
    """The polytope ``{m : <m, v_i> >= -c_i}`` with its cone-to-face map."""
    _check_divisor(fan, d)
    poly = Polyhedron([(v, c) for v, c in zip(fan.rays, d.coeffs)], fan.rank)
    faces = {cone: poly.with_equalities(sorted(cone)) for cone in fan.all_cones}
    return MomentPolytope(poly, faces)


# --- cohomology -------------------------------------------------------------------

@dataclass(frozen=True)
class GradedCohomology:
    """Weight-graded dimensions; ``table`` keeps only nonzero weights."""

    rank: int
    table: dict = field(hash=False)

    @property
    def total_dims(self):
        out = [0] * (self.rank + 1)
        for dims in self.table.values():
            for k, x in enumerate(dims):
                out[k] += x
        return out

    @property
    def euler(self):
        return sum((-1) ** k * x for k, x in enumerate(self.total_dims))

    def at(self, m):
        return list(self.table.get(tuple(m), (0,) * (self.rank + 1)))

    def weights(self):
        return sorted(self.table)


class _Nerve:
    """Nerve of the maximal-cone cover with the ray set of every simplex."""

    def __init__(self, fan):
        self.rank = fan.rank
        k = len(fan.max_cones)
        self.simplices = {}
        for p in range(k):
            for s in combinations(range(k), p + 1):
                rays = frozenset.intersection(*(fan.max_cones[i] for i in s))
                self.simplices.setdefault(p, []).append((s, rays))

    @lru_cache(maxsize=None)
    def cohomology(self, negative):
        """Cohomology of the subcomplex of simplices avoiding ``negative`` rays."""
        occupied = {p: [s for s, rays in items if not (rays & negative)]
                    for p, items in self.simplices.items()}
        index = {p: {s: i for i, s in enumerate(ss)} for p, ss in occupied.items()}
        ranks = {}
        for p in occupied:
            if p + 1 not in occupied or not occupied[p] or not occupied[p + 1]:
                ranks[p] = 0
                continue
            rows = []
            for t in occupied[p + 1]:
                row = [0] * len(occupied[p])
                for j in range(len(t)):
                    face = t[:j] + t[j + 1:]
                    if face in index[p]:
                        row[index[p][face]] = (-1) ** j
                rows.append(row)
            ranks[p] = rank(rows)
        dims = []
        for p in range(self.rank + 1):
            size = len(occupied.get(p, ()))
            dims.append(size - ranks.get(p, 0) - ranks.get(p - 1, 0))
        # Čech degrees beyond n vanish on a smooth complete fan.
        top = max(occupied) if occupied else -1
        for p in range(self.rank + 1, top + 1):
            if len(occupied[p]) - ranks.get(p, 0) - ranks.get(p - 1, 0):
                raise ToricError("Čech cohomology above the dimension")
        return tuple(dims)


_NERVES = {}


def _nerve(fan):
    key = (fan.rank, fan.rays, fan.max_cones)
    if key not in _NERVES:
        _NERVES[key] = _Nerve(fan)
    return _NERVES[key]


def _negative_rays(fan, d, m):
    return frozenset(i for i, v in enumerate(fan.rays) if dot(m, v) < -d.coeffs[i])


def weight_cohomology(fan, d, m):
    """Dimensions of ``H^k(X, O(D))_m`` for ``k = 0..n``."""
    _check_divisor(fan, d)
    _require_smooth_complete(fan)
    return list(_nerve(fan).cohomology(_negative_rays(fan, d, m)))


def _box(points, margin):
    n = len(points[0])
    lo = [floor(min(Fraction(p[i]) for p in points)) - margin for i in range(n)]
    hi = [ceil(max(Fraction(p[i]) for p in points)) + margin for i in range(n)]
    return lo, hi


def _scan(fan, d, lo, hi):
    nerve = _nerve(fan)
    weights = list(product(*(range(a, b + 1) for a, b in zip(lo, hi))))
    dims = pmap(lambda m: nerve.cohomology(_negative_rays(fan, d, m)), weights)
    return {m: x for m, x in zip(weights, dims) if any(x)}


def _on_shell(m, lo, hi):
    return any(x == a or x == b for x, a, b in zip(m, lo, hi))


def cohomology(fan, d):
    """All weights of ``H^*(X, O(D))``, searched in the box around ``conv{u}``."""
    _check_divisor(fan, d)
    _require_smooth_complete(fan)
    us = list(_cartier(fan, d).values())
    lo, hi = _box(us, 1)
    table = _scan(fan, d, lo, hi)
    if any(_on_shell(m, lo, hi) for m in table):
        span = max(b - a for a, b in zip(lo, hi))
        lo, hi = _box(us, 1 + span)
        table = _scan(fan, d, lo, hi)
        if any(_on_shell(m, lo, hi) for m in table):
            raise BoundingRegionError("cohomology reaches the search-box boundary")
    return GradedCohomology(fan.rank, table)


def graded_hom(fan, da, db):
    """``Ext^*(O(D_a), O(D_b))`` graded by torus weight."""
    return cohomology(fan, db - da)


def nef_h0_count(fan, d):
    """Lattice points of the moment polytope (``h^0`` for nef divisors)."""
    return len(lattice_points(moment_polytope(fan, d).polytope))


# --- K-classes ---------------------------------------------------------------------

class KClass:
    """Integer combination of classes of ample equivariant line bundles."""

    def __init__(self, fan, terms=()):
        self.fan = fan
        merged = {}
        for coeff, d in terms:
            d = d if isinstance(d, TDivisor) else TDivisor(d)
            _check_divisor(fan, d)
            merged[d] = merged.get(d, 0) + int(coeff)
        for d in merged:
            if not is_ample(fan, d):
                raise NotAmpleError(f"{list(d.coeffs)} is not ample")
        self.terms = tuple(sorted(((k, d) for d, k in merged.items() if k), key=lambda t: t[1].coeffs))

    def __add__(self, other):
        return KClass(self.fan, self.terms + other.terms)

    def __neg__(self):
        return KClass(self.fan, [(-k, d) for k, d in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, KClass) and self.fan == other.fan and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"KClass({[(k, list(d.coeffs)) for k, d in self.terms]})"

    def euler(self):
        return sum(k * cohomology(self.fan, d).euler for k, d in self.terms)
