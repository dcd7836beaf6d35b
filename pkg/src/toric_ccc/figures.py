"""Deterministic SVG pictures: fans, the conical Lagrangian on the torus,
moment polytopes, tropical amoebas and the P^1 T-dual graph."""

from dataclasses import dataclass
from fractions import Fraction
from math import atan2, ceil, exp, floor, pi

from .bundles import moment_polytope
from .errors import IncompatibleFigureError
from .fans import Fan
from .kernel.polyhedra import lattice_points
from .lg import TropicalCurve

SIZE = 600
MARGIN = 40
PALETTE = ("#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#117a65", "#5d6d7e")
KINDS = ("fan", "lambda-square", "polytope", "amoeba", "tdual-graph")


def tdual_graph_p1(c1, c2, samples):
    """``(y, gamma/2pi)`` on a uniform grid over ``[-5, 5]``."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    out = []
    for k in range(samples):
        y = -5 + 10 * k / (samples - 1)
        e = exp(2 * y)
        out.append((y, (c1 + c2) * e / (1 + e) - c1))
    return out


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    source: object
    out: str = None
    divisor: object = None


class _Canvas:
    """Maps a world box onto the fixed square canvas (y pointing up)."""

    def __init__(self, lo, hi):
        span = max(hi[0] - lo[0], hi[1] - lo[1]) or 1
        self.lo = lo
        self.scale = (SIZE - 2 * MARGIN) / span
        self.items = []

    def xy(self, p):
        x = MARGIN + (float(p[0]) - float(self.lo[0])) * self.scale
        y = SIZE - MARGIN - (float(p[1]) - float(self.lo[1])) * self.scale
        return f"{x:.3f}", f"{y:.3f}"

    def line(self, p, q, color, width=2, extra=""):
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                          f'stroke="{color}" stroke-width="{width}"{extra}/>')

    def polygon(self, pts, fill, stroke="#000000", opacity="0.25"):
        coords = " ".join(",".join(self.xy(p)) for p in pts)
        self.items.append(f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
                          f'stroke="{stroke}" stroke-width="2"/>')

    def polyline(self, pts, color):
        coords = " ".join(",".join(self.xy(p)) for p in pts)
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')

    def dot(self, p, color, r=4):
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{color}"/>')

    def group(self, attrs, draw):
        self.items.append(f"<g {attrs}>")
        draw()
        self.items.append("</g>")

    def render(self, title):
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">')
        body = [head, f"<title>{title}</title>",
                f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>']
        return "\n".join(body + self.items + ["</svg>"]) + "\n"


def _need_fan(spec, rank=None):
    if not isinstance(spec.source, Fan):
        raise IncompatibleFigureError(f"{spec.kind} figures need a fan")
    if rank is not None and spec.source.rank != rank:
        raise IncompatibleFigureError(f"{spec.kind} figures need a rank {rank} fan")
    return spec.source


def _fan_svg(spec):
    fan = _need_fan(spec)
    if fan.rank > 2:
        raise IncompatibleFigureError("fan figures are drawn for rank <= 2")
    rays = [r if fan.rank == 2 else (r[0], 0) for r in fan.rays]
    reach = max(max(abs(x) for x in r) for r in rays)
    c = _Canvas((-reach - 1, -reach - 1), (reach + 1, reach + 1))
    origin = (0, 0)
    if fan.rank == 2:
        for k, cone in enumerate(fan.max_cones):
            pts = [origin] + [rays[i] for i in sorted(cone, key=lambda i: _angle(rays[i]))]
            c.polygon(pts, PALETTE[k % len(PALETTE)], opacity="0.15")
    for i, r in enumerate(rays):
        c.line(origin, r, PALETTE[i % len(PALETTE)], 3, f' data-ray="{i}"')
        c.dot(r, PALETTE[i % len(PALETTE)])
    return c.render("fan")


def _angle(v):
    return atan2(v[1], v[0]) % (2 * pi)


def _torus_segments(v):
    """Segments of ``{m : <m, v> in Z}`` inside the unit square."""
    a, b = v
    vals = [a * x + b * y for x in (0, 1) for y in (0, 1)]
    segs = []
    for k in range(floor(min(vals)), ceil(max(vals)) + 1):
        pts = set()
        for x in (0, 1):
            if b != 0:
                y = Fraction(k - a * x, b)
                if 0 <= y <= 1:
                    pts.add((Fraction(x), y))
        for y in (0, 1):
            if a != 0:
                x = Fraction(k - b * y, a)
                if 0 <= x <= 1:
                    pts.add((x, Fraction(y)))
        pts = sorted(pts)
        if len(pts) >= 2 and pts[0] != pts[-1]:
            segs.append((pts[0], pts[-1]))
    return segs


def _lambda_square_svg(spec):
    fan = _need_fan(spec, 2)
    c = _Canvas((0, 0), (1, 1))
    c.polygon([(0, 0), (1, 0), (1, 1), (0, 1)], "#ffffff", opacity="0")
    for i, v in enumerate(fan.rays):
        color = PALETTE[i % len(PALETTE)]
        segs = _torus_segments(v)

        def draw(segs=segs, v=v, color=color):
            norm = (v[0] ** 2 + v[1] ** 2) ** 0.5
            tick = (-v[0] / norm * 0.03, -v[1] / norm * 0.03)
            for p, q in segs:
                c.line(p, q, color, 2)
                for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                    m = (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))
                    c.line(m, (float(m[0]) + tick[0], float(m[1]) + tick[1]), color, 1)

        c.group(f'class="family" data-ray="{i}"', draw)
    # the two-dimensional cones all sit over the lattice point
    for p in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        c.dot(p, "#000000", 5)
    return c.render("lambda-square")


def _polytope_svg(spec):
    fan = _need_fan(spec, 2)
    if spec.divisor is None:
        raise IncompatibleFigureError("polytope figures need a divisor")
    poly = moment_polytope(fan, spec.divisor).polytope
    verts = poly.ordered_vertices()
    pts = lattice_points(poly)
    lo = (min(v[0] for v in verts) - 1, min(v[1] for v in verts) - 1)
    hi = (max(v[0] for v in verts) + 1, max(v[1] for v in verts) + 1)
    c = _Canvas(lo, hi)
    c.polygon(verts, PALETTE[0])
    for p in pts:
        c.dot(p, PALETTE[1])
    return c.render("polytope")


def _amoeba_svg(spec):
    curve = spec.source
    if not isinstance(curve, TropicalCurve):
        raise IncompatibleFigureError("amoeba figures need a tropical curve")
    vs = curve.vertices
    lo = (min(v[0] for v in vs) - 2, min(v[1] for v in vs) - 2)
    hi = (max(v[0] for v in vs) + 2, max(v[1] for v in vs) + 2)
    c = _Canvas(lo, hi)
    for k, region in enumerate(curve.regions.values()):
        c.polygon(region, PALETTE[(k + 2) % len(PALETTE)], opacity="0.2")
    for i, j, w in curve.edges:
        c.line(vs[i], vs[j], PALETTE[0], 1 + w)
    for i, d, w in curve.rays:
        reach = 2 / max(abs(d[0]), abs(d[1]))
        c.line(vs[i], (vs[i][0] + reach * d[0], vs[i][1] + reach * d[1]), PALETTE[1], 1 + w)
    for v in vs:
        c.dot(v, "#000000")
    return c.render("amoeba")


def _tdual_svg(spec):
    pts = spec.source
    if not isinstance(pts, (list, tuple)) or not pts or len(pts[0]) != 2:
        raise IncompatibleFigureError("tdual-graph figures need (y, value) samples")
    ys = [p[1] for p in pts]
    lo, hi = min(min(ys), 0) - 1, max(max(ys), 0) + 1
    c = _Canvas((-5, lo), (5, hi))
    c.line((-5, 0), (5, 0), "#999999", 1)
    c.polyline(pts, PALETTE[0])
    return c.render("tdual-graph")


_RENDERERS = {
    "fan": _fan_svg,
    "lambda-square": _lambda_square_svg,
    "polytope": _polytope_svg,
    "amoeba": _amoeba_svg,
    "tdual-graph": _tdual_svg,
}


def render_svg(spec):
    if spec.kind not in _RENDERERS:
        raise IncompatibleFigureError(f"unknown figure kind {spec.kind!r}")
    text = _RENDERERS[spec.kind](spec)
    if spec.out:
        with open(spec.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
