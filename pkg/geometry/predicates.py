"""Exact orientation and containment predicates."""
import itertools
import math
from fractions import Fraction

import numpy as np

from overlap_lab.exceptions import DegenerateSimplexError, DimensionMismatch

# Below this magnitude scaled coordinates fit int64 cross products without overflow.
_INT64_SAFE = 2 ** 29


def _sign(value):
    return (value > 0) - (value < 0)


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def signed_area2(a, b, c):
    """Twice the signed area of triangle abc (exact)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orientation(a, b, c):
    for p in (a, b, c):
        if len(p) != 2:
            raise DimensionMismatch(f"orientation needs 2-dimensional points, got dimension {len(p)}")
    return _sign(signed_area2(a, b, c))


def determinant(rows):
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in rows]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] / m[col][col]
            if factor:
                for c in range(col, size):
                    m[r][c] -= factor * m[col][c]
    return det


def simplex_orientation(vertices):
    """Sign of det(v_1 - v_0, ..., v_d - v_0); 0 when the vertices are affinely dependent."""
    base = vertices[0]
    return _sign(determinant([[v[i] - base[i] for i in range(len(base))] for v in vertices[1:]]))


def point_in_simplex(q, vertices):
    """Closed containment of q in the simplex spanned by d+1 affinely independent vertices."""
    vertices = list(vertices)
    d = len(q)
    if len(vertices) != d + 1 or any(len(v) != d for v in vertices):
        raise DimensionMismatch(f"a simplex in dimension {d} needs {d + 1} vertices of dimension {d}")
    if d == 2:
        a, b, c = vertices
        o = orientation(a, b, c)
        if o == 0:
            raise DegenerateSimplexError(f"collinear triangle {a}, {b}, {c}")
        return (orientation(a, b, q) * o >= 0 and orientation(b, c, q) * o >= 0
                and orientation(c, a, q) * o >= 0)
    base = simplex_orientation(vertices)
    if base == 0:
        raise DegenerateSimplexError("affinely dependent simplex vertices")
    for i in range(d + 1):
        replaced = vertices[:i] + [q] + vertices[i + 1:]
        if simplex_orientation(replaced) * base < 0:
            return False
    return True


def integer_coordinates(points, extra=()):
    """Scale all coordinates by the lcm of their denominators.

    Returns (array of shape (len(points) + len(extra), d), scale). The array is int64 when
    cross products cannot overflow, otherwise an object array of Python ints.
    """
    rows = [tuple(p) for p in points] + [tuple(p) for p in extra]
    if not rows:
        return np.zeros((0, 2), dtype=np.int64), 1
    scale = 1
    for row in rows:
        for value in row:
            scale = math.lcm(scale, Fraction(value).denominator)
    ints = [[int(Fraction(v) * scale) for v in row] for row in rows]
    bound = max(abs(v) for row in ints for v in row)
    dtype = np.int64 if bound < _INT64_SAFE else object
    return np.array(ints, dtype=dtype), scale


def area_table(coords):
    """area[a, b, c] = cross(p_b - p_a, p_c - p_a) for integer coordinates, shape (n, n, n)."""
    x = coords[:, 0]
    y = coords[:, 1]
    dx = x[None, :] - x[:, None]
    dy = y[None, :] - y[:, None]
    return dx[:, :, None] * dy[:, None, :] - dy[:, :, None] * dx[:, None, :]


def sign_array(values):
    return (values > 0).astype(np.int8) - (values < 0).astype(np.int8)


def _reduced_directions(coords, a):
    """Directions from point a to the others, divided by their gcd and folded to one half-plane."""
    delta = np.delete(coords, a, axis=0) - coords[a]
    if delta.dtype == object:
        rows = []
        for dx, dy in delta:
            g = math.gcd(int(dx), int(dy)) or 1
            dx, dy = int(dx) // g, int(dy) // g
            rows.append((-dx, -dy) if dy < 0 or (dy == 0 and dx < 0) else (dx, dy))
        return rows
    g = np.gcd(delta[:, 0], delta[:, 1])
    g[g == 0] = 1
    delta = delta // g[:, None]
    flip = (delta[:, 1] < 0) | ((delta[:, 1] == 0) & (delta[:, 0] < 0))
    delta[flip] *= -1
    return [tuple(r) for r in delta.tolist()]


def general_position_check(point_set):
    """True iff no d+1 points are affinely dependent (coincident points count as dependent)."""
    n, d = len(point_set), point_set.d
    if n <= d:
        return len(set(point_set.points)) == n
    if d == 2:
        if len(set(point_set.points)) != n:
            return False
        coords, _ = integer_coordinates(point_set.points)
        # three collinear points show up as a repeated reduced direction from one of them
        return all(len(set(_reduced_directions(coords, a))) == n - 1 for a in range(n))
    if d == 1:
        return len(set(point_set.points)) == n
    for combo in itertools.combinations(point_set.points, d + 1):
        if simplex_orientation(list(combo)) == 0:
            return False
    return True
