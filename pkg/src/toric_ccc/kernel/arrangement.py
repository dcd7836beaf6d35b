"""Representative points for every cell of an affine hyperplane arrangement (n <= 2)."""

from fractions import Fraction

from ..errors import UnsupportedRankError
from .linalg import primitive


def _line_set(hyperplanes):
    out = set()
    for a, o in hyperplanes:
        if not any(a):
            continue
        a = tuple(Fraction(x) for x in a)
        o = Fraction(o)
        # scale so the first nonzero coordinate is 1
        lead = next(x for x in a if x != 0)
        out.add((tuple(x / lead for x in a), o / lead))
    return sorted(out)


def _fill(values):
    """Sorted values, their midpoints and one point beyond each end."""
    vals = sorted(set(values))
    if not vals:
        return [Fraction(0)]
    out = [vals[0] - 1]
    for i, v in enumerate(vals):
        out.append(v)
        if i + 1 < len(vals):
            out.append((v + vals[i + 1]) / 2)
    out.append(vals[-1] + 1)
    return out


def cell_samples(hyperplanes, n):
    """One or more points in every open cell of the arrangement ``<a,x> + o = 0``.

    Uses a vertical slab decomposition, so the point set meets every face of
    the arrangement (chambers, edges and vertices).  Output is sorted.
    """
    lines = _line_set(hyperplanes)
    if n == 1:
        return [(x,) for x in _fill(-o / a[0] for a, o in lines)]
    if n != 2:
        raise UnsupportedRankError("cell sampling implemented for n <= 2")
    xs = []
    for a, o in lines:
        if a[1] == 0:
            xs.append(-o / a[0])
    for i in range(len(lines)):
        (a1, o1) = lines[i]
        for j in range(i + 1, len(lines)):
            (a2, o2) = lines[j]
            d = a1[0] * a2[1] - a1[1] * a2[0]
            if d != 0:
                xs.append((-o1 * a2[1] + o2 * a1[1]) / d)
    pts = []
    for x in _fill(xs):
        ys = [-(o + a[0] * x) / a[1] for a, o in lines if a[1] != 0]
        pts.extend((x, y) for y in _fill(ys))
    return sorted(set(pts))


def central_lines(cone_normals):
    """Hyperplanes through the origin spanned by the given normals."""
    return [(primitive(a), 0) for a in cone_normals if any(a)]
