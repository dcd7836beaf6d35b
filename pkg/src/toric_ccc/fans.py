"""Fans, their predicates, the built-in library and surface intersection numbers."""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from itertools import combinations

from .errors import (
    InvalidFanError, NotCoveredError, UnknownFanError, UnsupportedFanError,
)
from .kernel.linalg import add, is_primitive, rank, scale, smith_invariants
from .kernel.polyhedra import Cone, _angle_cmp, dual_cone

COMPLETENESS_SAMPLES = 100
COMPLETENESS_SEED = 20240601


@dataclass(frozen=True)
class FanFlags:
    smooth: bool
    complete: bool
    simplicial: bool
    failed_test: str = ""


class Fan:
    """A rational polyhedral fan given by primitive rays and maximal cones.

    Cones are referred to by frozensets of ray indices; ``frozenset()`` is the
    zero cone.  Construction validates the fan axioms.
    """

    def __init__(self, rays, max_cones, rank_=None):
        self.rays = tuple(tuple(int(x) for x in r) for r in rays)
        self.max_cones = tuple(frozenset(c) for c in max_cones)
        if rank_ is None:
            if not self.rays:
                raise InvalidFanError("rank needed for a fan without rays")
            rank_ = len(self.rays[0])
        self.rank = rank_
        self._validate()

    # cone geometry ---------------------------------------------------------
    def cone(self, idx):
        return self._cones[frozenset(idx)]

    @cached_property
    def _cones(self):
        out = {}
        for c in self.max_cones:
            geo = Cone([self.rays[i] for i in c], self.rank)
            for face in geo.faces():
                ids = frozenset(i for i in c if face.contains(self.rays[i]))
                out[ids] = Cone([self.rays[i] for i in ids], self.rank)
        out.setdefault(frozenset(), Cone.zero(self.rank))
        return out

    @cached_property
    def all_cones(self):
        """All cones sorted by (dimension, sorted ray indices)."""
        return tuple(sorted(self._cones, key=lambda c: (len(c), sorted(c))))

    def dual(self, idx):
        """Dual cone of a cone of the fan (cached)."""
        key = frozenset(idx)
        if key not in self._duals:
            self._duals[key] = dual_cone(self.cone(key))
        return self._duals[key]

    @cached_property
    def _duals(self):
        return {}

    def cone_dim(self, idx):
        return self.cone(idx).dim

    def _validate(self):
        n = self.rank
        if len(set(self.rays)) != len(self.rays):
            raise InvalidFanError("rays must be pairwise distinct")
        for r in self.rays:
            if len(r) != n:
                raise InvalidFanError(f"ray {r} has wrong length for rank {n}")
            if not is_primitive(r):
                raise InvalidFanError(f"ray {r} is not primitive")
        for k, c in enumerate(self.max_cones):
            if not c or any(i < 0 or i >= len(self.rays) for i in c):
                raise InvalidFanError(f"maximal cone {sorted(c)} has invalid indices")
            geo = Cone([self.rays[i] for i in c], n)
            if not geo.is_pointed:
                raise InvalidFanError(f"cone {sorted(c)} is not strongly convex")
            if set(geo.rays) != {self.rays[i] for i in c}:
                raise InvalidFanError(f"cone {sorted(c)} lists a non-extreme ray")
        for (i, a), (j, b) in combinations(enumerate(self.max_cones), 2):
            ca = Cone([self.rays[k] for k in a], n)
            cb = Cone([self.rays[k] for k in b], n)
            inter = Cone.from_inequalities(list(ca.facet_normals) + list(cb.facet_normals), n)
            common = a & b
            face = Cone([self.rays[k] for k in common], n)
            if inter != face or not face.is_face_of(ca) or not face.is_face_of(cb):
                raise InvalidFanError(
                    f"cones {sorted(a)} and {sorted(b)} do not meet in a common face",
                    pair=(i, j))

    def cone_rays(self, idx):
        return [self.rays[i] for i in sorted(idx)]

    def is_face(self, small, big):
        return frozenset(small) <= frozenset(big)

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.rank == other.rank
                and self.rays == other.rays and self.max_cones == other.max_cones)

    def __hash__(self):
        return hash((self.rank, self.rays, self.max_cones))

    def __repr__(self):
        cones = [sorted(c) for c in self.max_cones]
        return f"Fan(rays={list(self.rays)}, max_cones={cones})"


def build_fan(rays, max_cones, rank_=None):
    return Fan(rays, max_cones, rank_)


def _ray_matrix_smooth(vectors):
    if not vectors:
        return True
    if rank(vectors) != len(vectors):
        return False
    return all(d == 1 for d in smith_invariants(vectors))


def classify(fan):
    if "_flags" not in fan.__dict__:
        fan.__dict__["_flags"] = _classify(fan)
    return fan.__dict__["_flags"]


def _classify(fan):
    simplicial = all(len(c) == fan.cone_dim(c) for c in fan.all_cones)
    smooth = simplicial and all(_ray_matrix_smooth(fan.cone_rays(c)) for c in fan.all_cones)
    complete, failed = _completeness(fan)
    return FanFlags(smooth=smooth, complete=complete, simplicial=simplicial, failed_test=failed)


def _completeness(fan):
    n = fan.rank
    if any(fan.cone_dim(c) != n for c in fan.max_cones):
        return False, "pure"
    ridges = [c for c in fan.all_cones if fan.cone_dim(c) == n - 1]
    adjacency = {i: set() for i in range(len(fan.max_cones))}
    for r in ridges:
        owners = [i for i, m in enumerate(fan.max_cones) if r <= m]
        if len(owners) != 2:
            return False, "ridge"
        a, b = owners
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for nb in adjacency[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(fan.max_cones):
        return False, "connected"
    rng = random.Random(COMPLETENESS_SEED)
    for _ in range(COMPLETENESS_SAMPLES):
        x = tuple(Fraction(rng.randint(-1000, 1000), rng.randint(1, 97)) for _ in range(n))
        if not any(fan.cone(c).contains(x) for c in fan.max_cones):
            return False, "sampling"
    return True, ""


def cone_containing(fan, x):
    """Ray-index set of the unique cone whose relative interior holds ``x``."""
    best = None
    for c in fan.all_cones:
        if fan.cone(c).contains(x) and (best is None or fan.cone_dim(c) < fan.cone_dim(best)):
            best = c
    if best is None:
        raise NotCoveredError(f"{x} lies in no cone of the fan")
    return best


# --- library -----------------------------------------------------------------

def _cyclic(rays):
    k = len(rays)
    return rays, [(i, (i + 1) % k) for i in range(k)]


def library_fan(name):
    """Named fans: P1, P2, P3, F<m> (m >= 0), B1, B2, B3."""
    key = str(name).strip()
    if key == "P1":
        return Fan([(1,), (-1,)], [(0,), (1,)])
    if key == "P2":
        return Fan(*_cyclic([(1, 0), (0, 1), (-1, -1)]))
    if key == "P3":
        rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
        return Fan(rays, list(combinations(range(4), 3)))
    if key == "B1":
        return library_fan("F1")
    if key == "B2":
        return Fan(*_cyclic([(1, 0), (1, 1), (0, 1), (-1, -1)]))
    if key == "B3":
        return Fan(*_cyclic([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]))
    if key.startswith("F") and key[1:].isdigit():
        m = int(key[1:])
        return Fan(*_cyclic([(1, 0), (0, 1), (-1, -m), (0, -1)]))
    raise UnknownFanError(f"unknown library fan {name!r}")


LIBRARY_NAMES = ("P1", "P2", "P3", "F0", "F1", "F2", "F3", "B1", "B2", "B3")
SURFACE_NAMES = ("P2", "F0", "F1", "F2", "F3", "B2", "B3")


def ccw_order(fan):
    """Ray indices of a 2-d fan in counterclockwise order starting at ray 0."""
    if fan.rank != 2:
        raise UnsupportedFanError("cyclic order needs a surface fan")
    idx = sorted(range(len(fan.rays)), key=cmp_to_key(lambda i, j: _angle_cmp(fan.rays[i], fan.rays[j])))
    k = idx.index(0)
    return idx[k:] + idx[:k]


def surface_self_intersections(fan):
    """``{ray index: D_i . D_i}`` for a smooth complete surface fan."""
    flags = classify(fan)
    if fan.rank != 2 or not (flags.smooth and flags.complete):
        raise UnsupportedFanError("need a smooth complete surface fan")
    order = ccw_order(fan)
    k = len(order)
    out = {}
    for pos, i in enumerate(order):
        prev = fan.rays[order[pos - 1]]
        nxt = fan.rays[order[(pos + 1) % k]]
        s = add(prev, nxt)
        v = fan.rays[i]
        # s = a * v; v primitive so a is an integer
        comp = next(t for t in range(2) if v[t] != 0)
        a = s[comp] // v[comp]
        if scale(a, v) != s:
            raise UnsupportedFanError("neighbouring rays violate the smooth relation")
        out[i] = -a
    return out
