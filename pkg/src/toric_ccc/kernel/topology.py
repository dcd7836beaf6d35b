"""Relative cohomology of pairs of open convex polyhedra (dimension <= 2).

For open convex ``U`` and ``V`` with ``Z = U \\ V`` nonempty,
``H^k(U, Z) = H~^{k-1}(Z)`` since ``U`` is contractible.  ``Z`` is covered by
the sets ``A_j = U ∩ {<x, a_j> <= -o_j}`` (one per halfspace of ``V``); each
is convex and closed in ``Z``, so ``Z`` has the homotopy type of the nerve of
that cover.  Nerve simplices are decided exactly by clipping the closure of
``U`` and testing the centroid of the clipped polygon.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from ..errors import UnboundedPolyhedronError, UnsupportedRankError
from .linalg import dot, rank
from .polyhedra import Polyhedron, sort_ccw


def clip(points, constraints):
    """Intersect a convex polytope (vertex list) with closed halfspaces.

    ``points`` is a boundary-ordered vertex list (2-d) or any list of points
    on a line (1-d); each constraint ``(a, o)`` means ``<a, x> + o >= 0``.
    Returns the vertex list of the intersection (possibly empty/degenerate).
    """
    if not points:
        return []
    n = len(points[0])
    if n == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        for (a,), o in constraints:
            if a > 0:
                lo = max(lo, Fraction(-o) / a)
            elif a < 0:
                hi = min(hi, Fraction(-o) / a)
            elif o < 0:
                return []
            if lo > hi:
                return []
        return [(lo,), (hi,)] if lo != hi else [(lo,)]
    poly = list(points)
    for a, o in constraints:
        if not poly:
            break
        out = []
        m = len(poly)
        for i in range(m):
            p, q = poly[i], poly[(i + 1) % m]
            fp, fq = dot(a, p) + o, dot(a, q) + o
            if fp >= 0:
                out.append(p)
            if (fp > 0 > fq) or (fp < 0 < fq):
                t = Fraction(fp) / (fp - fq)
                out.append(tuple(pi + t * (qi - pi) for pi, qi in zip(p, q)))
        dedup = []
        for p in out:
            if not dedup or dedup[-1] != p:
                dedup.append(p)
        if len(dedup) > 1 and dedup[0] == dedup[-1]:
            dedup.pop()
        poly = dedup
    return poly


def _centroid(points):
    uniq = sorted(set(points))
    n = len(uniq[0])
    return tuple(sum(Fraction(p[i]) for p in uniq) / len(uniq) for i in range(n))


def feasible(start, strict, closed=()):
    """Is ``{x in conv(start) : strict > 0, closed >= 0}`` nonempty?

    ``start`` must be a bounded convex polytope given by boundary-ordered
    vertices; its own bounding halfspaces should appear in ``strict`` or
    ``closed`` as required.  Exact: the centroid of the clipped closure lies
    in its relative interior, which meets the strict set iff the set is
    nonempty.
    """
    poly = clip(start, list(strict) + list(closed))
    if not poly:
        return False
    c = _centroid(poly)
    return all(dot(a, c) + o > 0 for a, o in strict)


def _boundary_vertices(p):
    if p.ambient_dim == 2:
        return sort_ccw(p.vertices)
    return list(p.vertices)


def _nontrivial(halfspaces):
    return [(a, o) for a, o in halfspaces if any(a)]


@lru_cache(maxsize=4096)
def reduced_betti(simplices):
    """Reduced rational Betti numbers of a simplicial complex.

    ``simplices`` is a frozenset of sorted vertex tuples, closed under faces.
    """
    if not simplices:
        return ()
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    top = max(by_dim)
    index = {d: {s: i for i, s in enumerate(sorted(by_dim[d]))} for d in by_dim}
    ranks = {0: 1}  # augmentation C_0 -> Q
    for d in range(1, top + 1):
        rows = []
        for s in sorted(by_dim[d]):
            row = [0] * len(index[d - 1])
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                row[index[d - 1][face]] = (-1) ** k
            rows.append(row)
        ranks[d] = rank(rows)
    out = []
    for d in range(top + 1):
        out.append(len(by_dim[d]) - ranks[d] - ranks.get(d + 1, 0))
    return tuple(out)


def _relcohom_key(u, v):
    return (u.halfspaces, u.ambient_dim, v.halfspaces)


def relative_pair_cohomology(u, v):
    """Betti numbers ``b_k = dim H^k(U, U \\ V)`` for open interiors of U, V.

    ``u`` and ``v`` are closed polyhedra standing for their interiors.
    Returns a list of length ``n + 1``.
    """
    n = u.ambient_dim
    if n > 2:
        raise UnsupportedRankError("relative cohomology implemented for n <= 2")
    key = _relcohom_key(u, v)
    if key not in _RELCOHOM_CACHE:
        if len(_RELCOHOM_CACHE) > 200000:
            _RELCOHOM_CACHE.clear()
        _RELCOHOM_CACHE[key] = _relcohom(u, v)
    return list(_RELCOHOM_CACHE[key])


_RELCOHOM_CACHE = {}


def _relcohom(u, v):
    n = u.ambient_dim
    zero = (0,) * (n + 1)
    if u.is_empty or u.dim < n:
        return zero
    if not u.is_bounded:
        raise UnboundedPolyhedronError("U must be bounded")
    u_hs = _nontrivial(u.halfspaces)
    v_hs = _nontrivial(v.halfspaces)
    if any(o < 0 for a, o in v.halfspaces if not any(a)):
        return zero  # V empty
    if not v.is_empty and v.dim == n and all(v.contains(p) for p in u.vertices):
        return (1,) + (0,) * n
    start = _boundary_vertices(u)
    # V° empty or disjoint from U: Z = U, contractible.
    if v.is_empty or v.dim < n or not feasible(start, u_hs + v_hs):
        return zero
    complements = [(tuple(-x for x in a), -o) for a, o in v_hs]
    simplices = set()
    frontier = []
    for j, c in enumerate(complements):
        if feasible(start, u_hs, [c]):
            simplices.add((j,))
            frontier.append((j,))
    while frontier:
        nxt = []
        for s in frontier:
            for j in range(s[-1] + 1, len(complements)):
                t = s + (j,)
                if all(t[:k] + t[k + 1:] in simplices for k in range(len(t))) and \
                        feasible(start, u_hs, [complements[i] for i in t]):
                    simplices.add(t)
                    nxt.append(t)
        frontier = nxt
    if not simplices:
        return (1,) + (0,) * n
    betti = reduced_betti(frozenset(simplices))
    out = [0] * (n + 1)
    for k in range(1, n + 1):
        if k - 1 < len(betti):
            out[k] = betti[k - 1]
    return tuple(out)


def euler(betti):
    return sum((-1) ** k * b for k, b in enumerate(betti))


class PlanarCellComplex:
    """Closed cubical complex on a rational grid, for dimensions 1 and 2.

    Cells are grid vertices, unit grid edges and unit grid squares whose
    closures lie in the region; it is used as an independent model for
    Euler characteristics and connected components of planar sets.
    """

    def __init__(self, vertices, edges, squares, ambient_dim):
        self.vertices = vertices
        self.edges = edges
        self.squares = squares
        self.ambient_dim = ambient_dim

    @classmethod
    def from_region(cls, contains, lo, hi, step):
        n = len(lo)
        if n not in (1, 2):
            raise UnsupportedRankError("PlanarCellComplex supports n in (1, 2)")
        counts = [int((Fraction(hi[i]) - Fraction(lo[i])) / step) for i in range(n)]

        def pt(idx):
            return tuple(Fraction(lo[i]) + idx[i] * step for i in range(n))

        if n == 1:
            verts = {(i,) for i in range(counts[0] + 1) if contains(pt((i,)))}
            edges = {((i,), (i + 1,)) for (i,) in verts if (i + 1,) in verts}
            return cls(verts, edges, set(), 1)
        verts = {(i, j) for i in range(counts[0] + 1) for j in range(counts[1] + 1)
                 if contains(pt((i, j)))}
        edges = set()
        for (i, j) in verts:
            if (i + 1, j) in verts:
                edges.add(((i, j), (i + 1, j)))
            if (i, j + 1) in verts:
                edges.add(((i, j), (i, j + 1)))
        squares = {(i, j) for (i, j) in verts
                   if {(i + 1, j), (i, j + 1), (i + 1, j + 1)} <= verts}
        return cls(verts, edges, squares, 2)

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.squares)

    def components(self):
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in self.vertices})

    def betti(self):
        b0 = self.components()
        # planar: b2 = 0, so b1 = b0 - chi
        return [b0, b0 - self.euler_characteristic()]
