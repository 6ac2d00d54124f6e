"""Arrangement of the lines through pairs of points, and exact batch containment."""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from overlap_lab.exceptions import DimensionMismatch, GeneralPositionError

from .angular import sort_by_angle
from .points import Point, PointSet, centroid
from .predicates import _INT64_SAFE, cross, integer_coordinates, orientation, sign_array

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Line:
    point: Point
    direction: tuple

    @classmethod
    def through(cls, a, b):
        return cls(Point(tuple(a)), (b[0] - a[0], b[1] - a[1]))

    def at(self, t):
        return Point((self.point[0] + t * self.direction[0], self.point[1] + t * self.direction[1]))

    def side(self, p):
        """+1 left of the direction, -1 right, 0 on the line."""
        return orientation(self.point, self.at(1), p)

    def parameter(self, p):
        dx, dy = self.direction
        return Fraction((p[0] - self.point[0]) * dx + (p[1] - self.point[1]) * dy, dx * dx + dy * dy)

    def intersection(self, other):
        denom = cross(self.direction, other.direction)
        if denom == 0:
            return None
        offset = (other.point[0] - self.point[0], other.point[1] - self.point[1])
        return self.at(Fraction(cross(offset, other.direction)) / denom)


def _as_planar_points(points):
    pts = list(points.points if isinstance(points, PointSet) else points)
    pts = [p if isinstance(p, Point) else Point(tuple(p)) for p in pts]
    if any(p.d != 2 for p in pts):
        raise DimensionMismatch("arrangements are built for planar point sets")
    return pts


def pair_lines(points):
    pts = _as_planar_points(points)
    return [Line.through(pts[i], pts[j]) for i, j in itertools.combinations(range(len(pts)), 2)]


def _query_scaling(queries):
    nums, dens = [], []
    for q in queries:
        t = math.lcm(Fraction(q[0]).denominator, Fraction(q[1]).denominator)
        nums.append((int(Fraction(q[0]) * t), int(Fraction(q[1]) * t)))
        dens.append(t)
    return nums, dens


def orientation_matrix(points, pairs, queries):
    """Signs of orientation(points[a], points[b], q) for every query (rows) and pair (columns).

    Exact: the input points share one integer scale, every query keeps its own denominator.
    """
    coords, scale = integer_coordinates(points)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    queries = list(queries)
    if not len(queries) or not len(pairs):
        return np.zeros((len(queries), len(pairs)), dtype=np.int8)
    nums, dens = _query_scaling(queries)
    bound = max(max(abs(v) for row in nums for v in row) * scale,
                max(dens) * max(int(abs(v)) for v in coords.ravel()) if coords.size else 0)
    dtype = np.int64 if bound < _INT64_SAFE and coords.dtype != object else object
    a = coords[pairs[:, 0]].astype(dtype)
    b = coords[pairs[:, 1]].astype(dtype)
    qn = np.array(nums, dtype=object) * scale
    qn = qn.astype(dtype)
    t = np.array(dens, dtype=object).astype(dtype)
    dx = (b[:, 0] - a[:, 0])[None, :]
    dy = (b[:, 1] - a[:, 1])[None, :]
    wx = qn[:, 0][:, None] - t[:, None] * a[:, 0][None, :]
    wy = qn[:, 1][:, None] - t[:, None] * a[:, 1][None, :]
    return sign_array(dx * wy - dy * wx)


def containment_matrix(points, triangles, queries):
    """Boolean (queries x triangles) matrix of closed containment, computed exactly."""
    pts = _as_planar_points(points)
    triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    queries = list(queries)
    if not len(triangles):
        return np.zeros((len(queries), 0), dtype=bool)
    base = np.array([orientation(pts[a], pts[b], pts[c]) for a, b, c in triangles], dtype=np.int8)
    inside = np.ones((len(queries), len(triangles)), dtype=bool)
    for u, v in ((0, 1), (1, 2), (2, 0)):
        signs = orientation_matrix(pts, triangles[:, [u, v]], queries)
        inside &= (signs * base[None, :]) >= 0
    return inside


def arrangement_vertices(points):
    """Sorted distinct intersection points of the lines through pairs of points."""
    lines = pair_lines(points)
    found = set()
    for first, second in itertools.combinations(lines, 2):
        p = first.intersection(second)
        if p is not None:
            found.add(p)
    return sorted(found)


def _line_structure(lines):
    """Per line: sorted distinct vertex parameters and the vertex points."""
    on_line = [dict() for _ in lines]
    for (i, first), (j, second) in itertools.combinations(enumerate(lines), 2):
        p = first.intersection(second)
        if p is None:
            continue
        on_line[i][first.parameter(p)] = p
        on_line[j][second.parameter(p)] = p
    return [sorted(entries.items()) for entries in on_line]


def candidate_points(points, include_lower_faces=False):
    """One exact representative per 2-cell of the arrangement of all lines through point pairs.

    With ``include_lower_faces`` the arrangement vertices and one point per arrangement edge are
    added as well, so every closed containment pattern of the plane shows up.
    """
    pts = _as_planar_points(points)
    if not PointSet(tuple(pts), 2).general_position:
        raise GeneralPositionError("candidate points need a point set in general position")
    n = len(pts)
    if n == 0:
        return [Point.of(0, 0)]
    if n == 1:
        return [pts[0]]
    lines = pair_lines(pts)
    if n == 2:
        line = lines[0]
        normal = (-line.direction[1], line.direction[0])
        cells = [line.point + Point(normal), line.point - Point(normal)]
        return cells + ([pts[0], centroid(pts)] if include_lower_faces else [])

    structure = _line_structure(lines)
    incident = {}
    edge_reps = []
    for line, entries in zip(lines, structure):
        params = [t for t, _ in entries]
        reps = [line.at(params[0] - 1)]
        reps += [line.at((params[k] + params[k + 1]) / 2) for k in range(len(params) - 1)]
        reps.append(line.at(params[-1] + 1))
        edge_reps.extend(reps)
        for k, (_, vertex) in enumerate(entries):
            incident.setdefault(vertex, []).extend([reps[k], reps[k + 1]])

    vertices = sorted(incident)
    face_reps = []
    for vertex in vertices:
        around = incident[vertex]
        order = sort_by_angle(vertex, around)
        for k in range(len(order)):
            r1, r2 = around[order[k]], around[order[(k + 1) % len(order)]]
            face_reps.append(centroid([vertex, r1, r2]))

    pairs = list(itertools.combinations(range(n), 2))
    signatures = orientation_matrix(pts, pairs, face_reps)
    seen = set()
    cells = []
    for rep, row in zip(face_reps, signatures):
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            cells.append(rep)
    logger.debug(f"Arrangement of {len(lines)} lines: {len(vertices)} vertices, {len(cells)} cells")
    if include_lower_faces:
        return cells + vertices + edge_reps
    return cells
