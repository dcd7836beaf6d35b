"""Both sides of the correspondence for ample line bundles, and their comparison.

Coherent side: weight-graded Ext between equivariant line bundles.
Constructible side: an ample bundle becomes the extension by zero of the
constant sheaf on its open moment polytope, shifted by ``n``; homs between two
such objects at translate ``m`` are relative cohomology of
``(int A, int A minus int(m + B))``.  The translate ``m`` is reported at torus
weight ``-m``, which lines the two tables up.
"""

from dataclasses import dataclass, field
from math import ceil, floor
from itertools import product

import numpy as np

from ._parallel import pmap
from .bundles import TDivisor, graded_hom, is_ample, moment_polytope, GradedCohomology
from .errors import BoundingRegionError, NotAmpleError, UnsupportedRankError
from .kernel.linalg import dot, neg, solve_integer, sub
from .kernel.polyhedra import Cone, Polyhedron, orthogonal_complement
from .kernel.topology import relative_pair_cohomology


# --- conical Lagrangians ---------------------------------------------------------

@dataclass(frozen=True)
class LagrangianCell:
    """Base piece in M_R times a fiber cone in N_R.

    ``base`` is a polyhedron for bounded pieces and ``None`` for a periodic
    affine subspace ``point + span(directions) + M``.
    """

    point: tuple
    directions: tuple
    fiber: Cone
    cone: frozenset
    base: Polyhedron = field(default=None, compare=False)

    @property
    def base_dim(self):
        return len(self.directions)

    def is_conormal(self):
        return all(dot(d, g) == 0 for d in self.directions for g in self.fiber.generators)


@dataclass(frozen=True)
class ConicalLagrangian:
    cells: tuple
    periodic: bool
    rank: int

    def is_conormal(self):
        return all(c.is_conormal() for c in self.cells)


def lambda_sigma(fan):
    """One periodic cell ``(perp(sigma) + M) x (-sigma)`` per cone."""
    origin = (0,) * fan.rank
    cells = []
    for c in fan.all_cones:
        cone = fan.cone(c)
        cells.append(LagrangianCell(origin, tuple(orthogonal_complement(cone)), cone.negate(), c))
    return ConicalLagrangian(tuple(cells), True, fan.rank)


def lambda_ample(fan, d):
    """Cells ``F_sigma x (-sigma)`` over the faces of the moment polytope."""
    if not is_ample(fan, d):
        raise NotAmpleError(f"{list(d.coeffs)} is not ample")
    mp = moment_polytope(fan, d)
    cells = []
    for c in fan.all_cones:
        face = mp.face(c)
        cells.append(LagrangianCell(face.vertices[0], face.direction_basis,
                                    fan.cone(c).negate(), c, face))
    return ConicalLagrangian(tuple(cells), False, fan.rank)


@dataclass(frozen=True)
class Containment:
    contained: bool
    translates: dict = field(default_factory=dict)
    failing_cell: LagrangianCell = None


def lambda_contained(lc, ls):
    """Check every cell of ``lc`` lies in a lattice translate of a cell of ``ls``.

    On success ``translates`` maps each cell's cone to a lattice point ``chi``
    with the base inside ``chi + perp(sigma)``.
    """
    by_fiber = {}
    for cell in ls.cells:
        by_fiber.setdefault(cell.fiber, []).append(cell)
    translates = {}
    for cell in lc.cells:
        chi = None
        for target in by_fiber.get(cell.fiber, ()):
            chi = _lattice_translate(cell, target)
            if chi is not None:
                break
        if chi is None:
            return Containment(False, translates, cell)
        translates[cell.cone] = chi
    return Containment(True, translates)


def _lattice_translate(cell, target):
    normals = list(cell.fiber.generators)
    # base directions must be annihilated by the fiber
    if any(dot(d, v) for d in cell.directions for v in normals):
        return None
    n = len(cell.point)
    if not normals:
        return (0,) * n
    points = cell.base.vertices if cell.base is not None else (cell.point,)
    shift = [sub(p, target.point) for p in points]
    rhs = [dot(shift[0], v) for v in normals]
    if any(dot(s, v) != r for s in shift for v, r in zip(normals, rhs)):
        return None
    if any(getattr(r, "denominator", 1) != 1 for r in rhs):
        return None
    chi = solve_integer(normals, [int(r) for r in rhs])
    if chi is None:
        return None
    return tuple(a + b for a, b in zip(chi, target.point))


# --- generator hom calculus -----------------------------------------------------

@dataclass(frozen=True)
class ThetaObject:
    chi: tuple
    sigma: frozenset

    def __init__(self, chi, sigma):
        object.__setattr__(self, "chi", tuple(int(x) for x in chi))
        object.__setattr__(self, "sigma", frozenset(sigma))


@dataclass(frozen=True)
class ThetaHom:
    dim: int
    weight: tuple = None


def _check_theta(fan, obj):
    if obj.sigma not in fan.all_cones:
        raise ValueError(f"{sorted(obj.sigma)} is not a cone of the fan")


def theta_hom(fan, a, b):
    """Degree-zero hom between translated dual-cone generators (0 or 1)."""
    _check_theta(fan, a)
    _check_theta(fan, b)
    d = sub(a.chi, b.chi)
    if b.sigma <= a.sigma and fan.dual(b.sigma).contains(d):
        return ThetaHom(1, d)
    return ThetaHom(0)


def theta_compose(fan, a, b, c):
    first, second = theta_hom(fan, a, b), theta_hom(fan, b, c)
    if not (first.dim and second.dim):
        return ThetaHom(0)
    direct = theta_hom(fan, a, c)
    if not direct.dim:
        return ThetaHom(0)
    weight = tuple(x + y for x, y in zip(first.weight, second.weight))
    return ThetaHom(1, weight)


def oracle_radius(fan, spread):
    """A box radius that holds a witness whenever an inclusion fails.

    ``spread`` bounds ``|chi_a - chi_b|`` in the max norm.
    """
    rays = max(sum(abs(x) for x in v) for v in fan.rays)
    duals = max(max(abs(x) for x in g) for c in fan.all_cones
                for g in fan.dual(c).generators)
    return max(8, (spread * rays + 1) * duals)


class ThetaOracle:
    """Truncated graded-module test for ``theta_hom``.

    A degree-zero map of rank-one graded modules sends the generator
    ``x^chi_a`` to a multiple of itself, and extends iff every weight
    ``chi_a + s`` with ``s`` in the dual cone of ``sigma_a`` is a weight of the
    target.  Weights are enumerated in a box of the given radius.
    """

    def __init__(self, fan, radius):
        self.fan = fan
        self.radius = radius
        r = np.arange(-radius, radius + 1)
        grid = np.stack(np.meshgrid(*([r] * fan.rank), indexing="ij"), -1).reshape(-1, fan.rank)
        self.weights = {}
        self._cache = {}
        for c in fan.all_cones:
            normals = np.array(fan.cone(c).rays or [(0,) * fan.rank])
            inside = np.all(grid @ normals.T >= 0, axis=1)
            self.weights[c] = grid[inside]

    def __call__(self, a, b):
        d = np.array(a.chi) - np.array(b.chi)
        gens, lowest = self._lowest(a.sigma, b.sigma)
        return int(np.all(gens @ d + lowest >= 0))

    def _lowest(self, sa, sb):
        # per target generator v, the smallest <s, v> over enumerated s
        key = (sa, sb)
        if key not in self._cache:
            zero = [(0,) * self.fan.rank]
            gens = np.array(list(self.fan.cone(sb).generators) or zero)
            self._cache[key] = (gens, (self.weights[sa] @ gens.T).min(axis=0))
        return self._cache[key]


# --- costandard objects ---------------------------------------------------------

@dataclass(frozen=True)
class CostandardObject:
    polytope: Polyhedron
    shift: int
    label: TDivisor = None


def kappa(fan, d):
    if not is_ample(fan, d):
        raise NotAmpleError(f"{list(d.coeffs)} is not ample")
    return CostandardObject(moment_polytope(fan, d).polytope, fan.rank, d)


def _difference_box(a, b, margin):
    diffs = [sub(p, q) for p in a.vertices for q in b.vertices]
    n = a.ambient_dim
    lo = [floor(min(x[i] for x in diffs)) - margin for i in range(n)]
    hi = [ceil(max(x[i] for x in diffs)) + margin for i in range(n)]
    return lo, hi


def _costandard_scan(pa, pb, lo, hi):
    shifts = list(product(*(range(x, y + 1) for x, y in zip(lo, hi))))
    dims = pmap(lambda m: relative_pair_cohomology(pa, pb.translate(m)), shifts)
    return {m: tuple(x) for m, x in zip(shifts, dims) if any(x)}


def costandard_hom(fan, a, b):
    """Weight-graded Hom between costandard objects via relative cohomology."""
    n = fan.rank
    if n > 2:
        raise UnsupportedRankError("constructible homs are implemented for n <= 2")
    pa, pb = a.polytope, b.polytope
    lo, hi = _difference_box(pa, pb, 1)
    raw = _costandard_scan(pa, pb, lo, hi)
    shell = [m for m in raw if any(x in (l, h) for x, l, h in zip(m, lo, hi))]
    if shell:
        lo, hi = _difference_box(pa, pb, 1 + max(h - l for l, h in zip(lo, hi)))
        raw = _costandard_scan(pa, pb, lo, hi)
        if any(any(x in (l, h) for x, l, h in zip(m, lo, hi)) for m in raw):
            raise BoundingRegionError("constructible homs reach the search-box boundary")
    # shifts [n] on both sides cancel; translate m sits at weight -m
    table = {neg(m): dims + (0,) * (n + 1 - len(dims)) for m, dims in raw.items()}
    return GradedCohomology(n, table)


# --- verification ------------------------------------------------------------------

@dataclass(frozen=True)
class CccRow:
    weight: tuple
    coherent: tuple
    constructible: tuple

    @property
    def match(self):
        return self.coherent == self.constructible


@dataclass(frozen=True)
class CccReport:
    rows: tuple
    coherent_totals: tuple
    constructible_totals: tuple

    @property
    def passed(self):
        return all(r.match for r in self.rows)

    def to_text(self):
        lines = ["weight\tcoherent\tconstructible\tmatch"]
        for r in self.rows:
            lines.append("\t".join([
                ",".join(map(str, r.weight)),
                ",".join(map(str, r.coherent)),
                ",".join(map(str, r.constructible)),
                "ok" if r.match else "MISMATCH",
            ]))
        lines.append("total\t" + ",".join(map(str, self.coherent_totals)) + "\t"
                     + ",".join(map(str, self.constructible_totals)) + "\t"
                     + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def ccc_verify(fan, da, db, constructible_a=None, constructible_b=None):
    """Compare coherent and constructible homs weight by weight.

    ``constructible_a``/``constructible_b`` replace the costandard objects,
    which lets callers feed a deliberately wrong polytope.
    """
    if fan.rank > 2:
        raise UnsupportedRankError("verification is implemented for n <= 2")
    coh = graded_hom(fan, da, db)
    a = constructible_a or kappa(fan, da)
    b = constructible_b or kappa(fan, db)
    con = costandard_hom(fan, a, b)
    rows = tuple(CccRow(w, tuple(coh.at(w)), tuple(con.at(w)))
                 for w in sorted(set(coh.table) | set(con.table)))
    return CccReport(rows, tuple(coh.total_dims), tuple(con.total_dims))
