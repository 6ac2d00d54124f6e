"""Exact angular order of vectors around a centre."""
from functools import cmp_to_key

from .predicates import cross


def half(v):
    """0 for directions in [0, pi), 1 for [pi, 2pi), measured from the positive x axis."""
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def compare_angles(u, v):
    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def direction(center, point):
    return (point[0] - center[0], point[1] - center[1])


def sort_by_angle(center, points):
    """Indices of ``points`` in counterclockwise order around ``center``, starting at angle 0.

    Equal directions keep input order; points equal to the centre are rejected by callers.
    """
    keyed = [(direction(center, p), i) for i, p in enumerate(points)]
    key = cmp_to_key(lambda a, b: compare_angles(a[0], b[0]) or (a[1] - b[1]))
    return [i for _, i in sorted(keyed, key=key)]


def same_direction(u, v):
    return cross(u, v) == 0 and (u[0] * v[0] + u[1] * v[1]) > 0


def folded(v):
    """Map v to the representative of its line in the half-plane [0, pi); returns (vector, flipped)."""
    if half(v) == 0:
        return v, False
    return (-v[0], -v[1]), True
