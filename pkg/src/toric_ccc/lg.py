"""Superpotentials on the dual torus: critical points and tropical curves.

Critical points are found numerically (double precision) by Newton's method
in logarithmic coordinates.  The tropical side is exact over the rationals.
"""

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import exp, gcd, pi

import numpy as np

from .errors import NoCriticalPointsError
from .kernel.linalg import solve


def hori_vafa_exponents(m):
    """Rays of the Hirzebruch fan ``F_m``."""
    return ((1, 0), (0, 1), (-1, -m), (0, -1))


RESIDUAL_TOL = 1e-10
DEDUP_TOL = 1e-6


class LaurentPolynomial:
    def __init__(self, terms):
        merged = {}
        for a, c in terms:
            a = tuple(int(x) for x in a)
            merged[a] = merged.get(a, 0) + complex(c)
        self.terms = tuple(sorted((a, c) for a, c in merged.items() if c != 0))
        self.rank = len(self.terms[0][0]) if self.terms else 0

    @property
    def exponents(self):
        return np.array([a for a, _ in self.terms], dtype=float)

    @property
    def coefficients(self):
        return np.array([c for _, c in self.terms], dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return complex(sum(c * np.prod(z ** np.array(a)) for a, c in self.terms))

    def gradient(self, z):
        z = np.asarray(z, dtype=complex)
        return self.log_gradient(np.log(z)) / z

    def log_gradient(self, w):
        """``z_k dW/dz_k`` at ``z = exp(w)``."""
        a = self.exponents
        mono = self.coefficients * np.exp(a @ w)
        return a.T @ mono

    def log_hessian(self, w):
        a = self.exponents
        mono = self.coefficients * np.exp(a @ w)
        return (a.T * mono) @ a

    def hessian(self, z):
        """Matrix of second derivatives in the ``z`` coordinates."""
        z = np.asarray(z, dtype=complex)
        w = np.log(z)
        g = self.log_gradient(w)
        h = self.log_hessian(w)
        return (h - np.diag(g)) / np.outer(z, z)

    def __repr__(self):
        return f"LaurentPolynomial({[(a, c) for a, c in self.terms]})"


def hori_vafa(m, t):
    """``sum e^{-t_i} z^{v_i}`` over the rays of the Hirzebruch fan ``F_m``."""
    return LaurentPolynomial([(v, exp(-float(ti))) for v, ti in zip(hori_vafa_exponents(m), t)])


@dataclass
class CriticalPointSet:
    points: list
    values: list
    residuals: list
    hessian_dets: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)


def _newton(w_poly, w, steps=80):
    for _ in range(steps):
        g = w_poly.log_gradient(w)
        if not np.all(np.isfinite(g)):
            return None
        if np.max(np.abs(g)) < 1e-14:
            break
        try:
            step = np.linalg.solve(w_poly.log_hessian(w), g)
        except np.linalg.LinAlgError:
            return None
        w = w - step
        if not np.all(np.isfinite(w)) or np.max(np.abs(w.real)) > 50:
            return None
    return w


def _starts(rank, density):
    radii = np.linspace(-2.0, 2.0, 4 * density + 1)
    angles = [k * pi / (2 * density) for k in range(4 * density)]
    for r in product(radii, repeat=rank):
        for th in product(angles, repeat=rank):
            yield np.array(r) + 1j * np.array(th)


def critical_points(w_poly, density=1):
    """Deduplicated nondegenerate critical points in the torus.

    Starts are a grid over log-radius ``[-2, 2]`` and angles in quarter
    turns; ``density`` refines both.
    """
    found = []
    for w0 in _starts(w_poly.rank, density):
        w = _newton(w_poly, w0)
        if w is None:
            continue
        z = np.exp(w)
        res = float(np.linalg.norm(w_poly.gradient(z)))
        if not res < RESIDUAL_TOL:
            continue
        if any(np.max(np.abs(z - p)) <= DEDUP_TOL for p, _ in found):
            continue
        found.append((z, res))
    if not found:
        raise NoCriticalPointsError("no Newton start converged")
    found.sort(key=lambda p: (round(w_poly(p[0]).real, 9), round(w_poly(p[0]).imag, 9)))
    points = [tuple(complex(x) for x in z) for z, _ in found]
    return CriticalPointSet(
        points=points,
        values=[w_poly(z) for z in points],
        residuals=[r for _, r in found],
        hessian_dets=[complex(np.linalg.det(w_poly.hessian(z))) for z in points],
    )


# --- tropical curves -----------------------------------------------------------------

def _rational(x):
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass
class TropicalCurve:
    """Corner locus of ``min_j (<a_j, y> + h_j)``.

    ``edges`` are ``(i, j, weight)`` between vertex indices; ``rays`` are
    ``(i, primitive direction, weight)``.
    """

    vertices: list
    edges: list
    rays: list
    bounded_components: int
    regions: dict = field(default_factory=dict)

    def balancing_defects(self):
        """Per vertex, the weighted sum of primitive outgoing directions."""
        out = []
        for k, y in enumerate(self.vertices):
            total = [0, 0]
            for i, j, wt in self.edges:
                if k in (i, j):
                    other = self.vertices[j if i == k else i]
                    d = _primitive_direction(y, other)
                    total = [total[0] + wt * d[0], total[1] + wt * d[1]]
            for i, d, wt in self.rays:
                if i == k:
                    total = [total[0] + wt * d[0], total[1] + wt * d[1]]
            out.append(tuple(total))
        return out

    def is_balanced(self):
        return all(d == (0, 0) for d in self.balancing_defects())


def _primitive_direction(p, q):
    d = (q[0] - p[0], q[1] - p[1])
    den = d[0].denominator * d[1].denominator
    ints = (int(d[0] * den), int(d[1] * den))
    g = gcd(*ints)
    return (ints[0] // g, ints[1] // g)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points):
    """Convex hull vertices, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _lower_facets(lifted):
    """Lower hull facets of lifted points ``(a, h)`` as ``(alpha, point set)``."""
    facets = {}
    for p, q, r in combinations(lifted, 3):
        (a1, h1), (a2, h2), (a3, h3) = p, q, r
        det = _cross(a1, a2, a3)
        if det == 0:
            continue
        # solve h = <alpha, a> + beta through the three points
        m = [[a1[0], a1[1], 1], [a2[0], a2[1], 1], [a3[0], a3[1], 1]]
        al0, al1, beta = solve(m, [h1, h2, h3])
        if all(h >= al0 * a[0] + al1 * a[1] + beta for a, h in lifted):
            on = frozenset(a for a, h in lifted if h == al0 * a[0] + al1 * a[1] + beta)
            facets[on] = (al0, al1)
    return facets


def tropical_curve(terms):
    """Tropical curve of ``min_j (<a_j, y> + h_j)`` for ``terms = [(a_j, h_j)]``."""
    lifted = [(tuple(int(x) for x in a), _rational(h)) for a, h in terms]
    facets = _lower_facets(lifted)
    keys = sorted(facets, key=lambda s: sorted(s))
    vertices = [(-facets[k][0], -facets[k][1]) for k in keys]
    edge_faces = {}
    for idx, k in enumerate(keys):
        ring = _hull(list(k))
        for i in range(len(ring)):
            e = tuple(sorted((ring[i], ring[(i + 1) % len(ring)])))
            edge_faces.setdefault(e, []).append(idx)
    polygon = _hull([a for a, _ in lifted])
    edges, rays = [], []
    for (p, q), owners in sorted(edge_faces.items()):
        weight = gcd(q[0] - p[0], q[1] - p[1])
        if len(owners) == 2:
            edges.append((owners[0], owners[1], weight))
        else:
            # inward normal of the boundary edge of the Newton polygon
            d = ((p[1] - q[1]) // weight, (q[0] - p[0]) // weight)
            r = next(r for r in polygon if _cross(p, q, r) != 0)
            if d[0] * (r[0] - p[0]) + d[1] * (r[1] - p[1]) < 0:
                d = (-d[0], -d[1])
            rays.append((owners[0], d, weight))
    used = set(a for k in keys for a in k)
    regions = {}
    boundary = set(polygon)
    for a in sorted(used):
        if a in boundary or _on_polygon_boundary(a, polygon):
            continue
        around = [vertices[i] for i, k in enumerate(keys) if a in k]
        regions[a] = _ccw(around)
    return TropicalCurve(vertices, edges, rays, _bounded_count(len(vertices), edges), regions)


def _on_polygon_boundary(a, polygon):
    for i in range(len(polygon)):
        p, q = polygon[i], polygon[(i + 1) % len(polygon)]
        if _cross(p, q, a) == 0 and min(p[0], q[0]) <= a[0] <= max(p[0], q[0]) \
                and min(p[1], q[1]) <= a[1] <= max(p[1], q[1]):
            return True
    return False


def _ccw(points):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: cmath.phase(complex(float(p[0] - cx), float(p[1] - cy))))


def _bounded_count(nv, edges):
    """Bounded faces of the planar graph of bounded edges (Euler's formula)."""
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in edges:
        parent[find(i)] = find(j)
    components = len({find(i) for i in range(nv)})
    return len(edges) - nv + components


def tropicalize(m, t):
    """Tropical curve of ``W_m = lambda`` with the constant term at height 0."""
    terms = list(zip(hori_vafa_exponents(m), t)) + [((0, 0), 0)]
    return tropical_curve(terms)
