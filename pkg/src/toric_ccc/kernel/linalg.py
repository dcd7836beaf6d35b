"""Exact integer and rational linear algebra.

Vectors are plain tuples of ``int`` or ``fractions.Fraction``; matrices are
sequences of row tuples.  Everything here is exact.
"""

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def scale(k, a):
    return tuple(k * x for x in a)


def neg(a):
    return tuple(-x for x in a)


def normalize(v):
    """Turn integral-valued Fractions into ints, leave the rest alone."""
    out = []
    for x in v:
        if isinstance(x, Fraction) and x.denominator == 1:
            out.append(int(x))
        else:
            out.append(x)
    return tuple(out)


def to_rational(v):
    return tuple(Fraction(x) for x in v)


def gcd_list(values):
    return reduce(gcd, (abs(int(v)) for v in values), 0)


def primitive(v):
    """Smallest positive integer multiple of a nonzero rational vector.

    The direction is preserved: ``primitive((2, -4)) == (1, -2)``.
    """
    v = to_rational(v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = gcd_list(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def is_primitive(v):
    return gcd_list(v) == 1


def integer_rows(rows):
    """Scale each rational row to a primitive integer row (zero rows kept)."""
    out = []
    for r in rows:
        if any(r):
            out.append(primitive(r))
        else:
            out.append(tuple(0 for _ in r))
    return out


def rref(rows):
    """Reduced row echelon form over Q.  Returns (rows, pivot_columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows):
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return len(rref(rows)[1])


def det(matrix):
    """Determinant of a square matrix by fraction-exact elimination."""
    m = [list(map(Fraction, r)) for r in matrix]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return int(result) if result.denominator == 1 else result


def nullspace(rows, n):
    """Rational basis of {x in Q^n : r.x = 0 for all rows r}."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(matrix, rhs):
    """Unique rational solution of a square (or overdetermined) system.

    Returns ``None`` when the system is inconsistent or underdetermined.
    """
    if not matrix:
        return None
    n = len(matrix[0])
    aug = [tuple(r) + (b,) for r, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    if len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(x)


def in_span(vectors, v):
    if not any(v):
        return True
    return rank(list(vectors) + [v]) == rank(list(vectors))


# --- Hermite / Smith normal forms ------------------------------------------

def column_hnf(matrix, ncols=None):
    """Column-style Hermite reduction of an integer matrix.

    Returns ``(H, U, r)`` with ``A U = H``, ``U`` unimodular, the first ``r``
    columns of ``H`` in lower echelon form and the remaining columns zero.
    """
    a = [list(map(int, row)) for row in matrix]
    k = ncols if ncols is not None else (len(a[0]) if a else 0)
    u = [[int(i == j) for j in range(k)] for i in range(k)]

    def colop(dst, src, q):
        # column dst -= q * column src
        for row in a:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    def swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def negate(j):
        for row in a:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    p = 0
    for i in range(len(a)):
        if p == k:
            break
        while True:
            nz = [j for j in range(p, k) if a[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(a[i][j]))
            if j0 != p:
                swap(p, j0)
            done = True
            for j in range(p + 1, k):
                if a[i][j] != 0:
                    colop(j, p, a[i][j] // a[i][p])
                    if a[i][j] != 0:
                        done = False
            if done:
                break
        if a[i][p] != 0:
            if a[i][p] < 0:
                negate(p)
            for j in range(p):
                colop(j, p, a[i][j] // a[i][p])
            p += 1
    return [tuple(r) for r in a], [tuple(r) for r in u], p


def integer_kernel(matrix, n):
    """Z-basis of {x in Z^n : A x = 0}, rows HNF-reduced for canonicity."""
    rows = integer_rows(matrix)
    if not rows:
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    else:
        _, u, r = column_hnf(rows, n)
        basis = [tuple(u[i][j] for i in range(n)) for j in range(r, n)]
    return row_hnf(basis)


def row_hnf(basis):
    """Row Hermite normal form of a list of integer vectors (zero rows dropped)."""
    if not basis:
        return []
    n = len(basis[0])
    # transpose, column-reduce, transpose back
    cols = [tuple(b[i] for b in basis) for i in range(n)]
    h, _, r = column_hnf(cols, len(basis))
    return [tuple(h[i][j] for i in range(n)) for j in range(r)]


def solve_integer(matrix, rhs):
    """Some integer solution of ``A x = b`` or ``None`` if none exists."""
    if not matrix:
        return None
    k = len(matrix[0])
    if any(isinstance(v, Fraction) and v.denominator != 1 for row in matrix for v in row):
        raise ValueError("solve_integer needs an integer matrix")
    b = [Fraction(v) for v in rhs]
    h, u, r = column_hnf(matrix, k)
    y = [Fraction(0)] * k
    s = 0
    for i, row in enumerate(h):
        acc = b[i] - sum(row[j] * y[j] for j in range(s))
        if s < r and row[s] != 0:
            if acc % row[s] != 0:
                return None
            y[s] = acc / row[s]
            s += 1
        elif acc != 0:
            return None
    x = tuple(int(sum(u[i][j] * y[j] for j in range(k))) for i in range(k))
    if any(dot(row, x) != bv for row, bv in zip(matrix, b)):
        return None
    return x


def smith_invariants(matrix):
    """Invariant factors d_1 | d_2 | ... of an integer matrix.

    Computed from determinantal divisors; fine for the tiny matrices used
    here (at most 3 x r).
    """
    if not matrix:
        return []
    m = [list(map(int, r)) for r in matrix]
    nrows, ncols = len(m), len(m[0])
    divisors = [1]
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for rs in combinations(range(nrows), k):
            for cs in combinations(range(ncols), k):
                g = gcd(g, abs(int(det([[m[i][j] for j in cs] for i in rs]))))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]
