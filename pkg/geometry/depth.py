"""Simplicial depth of a query point with respect to a planar point set."""
import itertools
import logging
from fractions import Fraction
from dataclasses import dataclass
from math import comb

from overlap_lab.exceptions import DimensionMismatch

from .angular import folded, sort_by_angle
from .predicates import cross, orientation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DepthReport:
    count: int
    total: int
    method: str
    coincident: bool = False
    query: tuple = ()

    @property
    def fraction(self):
        return Fraction(self.count, self.total) if self.total else Fraction(0)


def closed_triangle_contains(q, a, b, c):
    """Closed containment that also accepts collinear triples (then the triangle is a segment)."""
    o = orientation(a, b, c)
    if o != 0:
        return (orientation(a, b, q) * o >= 0 and orientation(b, c, q) * o >= 0
                and orientation(c, a, q) * o >= 0)
    if orientation(a, b, q) != 0 or orientation(b, c, q) != 0 or orientation(a, c, q) != 0:
        return False
    xs = sorted(p[0] for p in (a, b, c))
    ys = sorted(p[1] for p in (a, b, c))
    return xs[0] <= q[0] <= xs[2] and ys[0] <= q[1] <= ys[2]


def brute_force_depth(q, points):
    return sum(1 for a, b, c in itertools.combinations(points, 3) if closed_triangle_contains(q, a, b, c))


def _degenerate_for_fast_path(q, points):
    """True when q is an input point or lies on a line through two input points."""
    if any(p == q for p in points):
        return True
    dirs = [folded((p[0] - q[0], p[1] - q[1]))[0] for p in points]
    ordered = [dirs[i] for i in sort_by_angle((0, 0), dirs)]
    return any(cross(ordered[i], ordered[i + 1]) == 0 for i in range(len(ordered) - 1))


def _fast_depth(q, points):
    n = len(points)
    order = sort_by_angle(q, points)
    vectors = [(points[i][0] - q[0], points[i][1] - q[1]) for i in order]
    excluded = 0
    j = 0
    for i in range(n):
        j = max(j, i + 1)
        while j < i + n and cross(vectors[i], vectors[j % n]) > 0:
            j += 1
        h = j - i - 1
        excluded += comb(h, 2)
    return comb(n, 3) - excluded


def simplicial_depth(q, points, method='auto'):
    """Number of closed triangles spanned by ``points`` that contain ``q``.

    The fast path needs q off every line through two points; otherwise (or with
    ``method='brute'``) all triples are enumerated.
    """
    points = list(points)
    if len(q) != 2 or any(len(p) != 2 for p in points):
        raise DimensionMismatch("simplicial depth is implemented for planar point sets")
    if len(points) < 3:
        return 0
    if method == 'brute' or _degenerate_for_fast_path(q, points):
        return brute_force_depth(q, points)
    return _fast_depth(q, points)


def depth_report(q, points):
    points = list(points)
    coincident = any(p == q for p in points)
    degenerate = coincident or (len(points) >= 3 and _degenerate_for_fast_path(q, points))
    count = simplicial_depth(q, points)
    if coincident:
        logger.info(f"Depth query {q} coincides with an input point; incident triangles counted")
    return DepthReport(count=count, total=comb(len(points), 3),
                       method='brute-force' if degenerate else 'radial-sweep', coincident=coincident,
                       query=tuple(q))
