"""Exact rational points and point sets."""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from overlap_lab.exceptions import DimensionMismatch, ValidationProblem


def to_rational(value):
    """Convert ints, Fractions, finite floats and 'p/q' / decimal strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationProblem(f"not a coordinate: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationProblem(f"coordinate must be finite, got {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationProblem(f"not an exact rational: {value!r}") from exc
    raise ValidationProblem(f"not a coordinate: {value!r}")


def snap(value, denominator):
    """Round a float to the nearest multiple of 1/denominator."""
    return Fraction(round(value * denominator), denominator)


@dataclass(frozen=True, order=True)
class Point:
    coords: tuple

    def __post_init__(self):
        coords = tuple(to_rational(c) for c in self.coords)
        if not coords:
            raise ValidationProblem("a point needs at least one coordinate")
        object.__setattr__(self, 'coords', coords)

    @classmethod
    def of(cls, *values):
        return cls(tuple(values))

    @property
    def d(self):
        return len(self.coords)

    @property
    def x(self):
        return self.coords[0]

    @property
    def y(self):
        return self.coords[1]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, index):
        return self.coords[index]

    def _check(self, other):
        if other.d != self.d:
            raise DimensionMismatch(f"dimension {self.d} vs {other.d}")

    def __add__(self, other):
        self._check(other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, factor):
        factor = to_rational(factor)
        return Point(tuple(c * factor for c in self.coords))

    def __str__(self):
        return '(' + ', '.join(str(c) for c in self.coords) + ')'


def centroid(points):
    points = list(points)
    d = points[0].d
    return Point(tuple(sum((p[i] for p in points), Fraction(0)) / len(points) for i in range(d)))


@dataclass(frozen=True)
class PointSet:
    """Ordered points of one dimension; index i is the image of vertex i in an embedding."""

    points: tuple
    d: int = 2

    def __post_init__(self):
        points = tuple(p if isinstance(p, Point) else Point(tuple(p)) for p in self.points)
        if points:
            dims = {p.d for p in points}
            if len(dims) != 1:
                raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
            object.__setattr__(self, 'd', dims.pop())
        if self.d < 1:
            raise ValidationProblem("dimension must be at least 1")
        object.__setattr__(self, 'points', points)

    @classmethod
    def from_rows(cls, rows, d=None):
        rows = [tuple(r) for r in rows]
        if d is None:
            d = len(rows[0]) if rows else 2
        return cls(tuple(Point(r) for r in rows), d)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index):
        return self.points[index]

    @cached_property
    def general_position(self):
        from .predicates import general_position_check
        return general_position_check(self)

    def subset(self, indices):
        return PointSet(tuple(self.points[i] for i in indices), self.d)

    def permuted(self, permutation):
        """Point set whose i-th point is self[permutation[i]]."""
        return PointSet(tuple(self.points[j] for j in permutation), self.d)

    def transformed(self, matrix, offset):
        """Image under x -> Ax + b with exact rational entries."""
        matrix = [[to_rational(v) for v in row] for row in matrix]
        offset = [to_rational(v) for v in offset]
        return PointSet(tuple(_affine(p, matrix, offset) for p in self.points), self.d)

    def bounding_box(self):
        lows = tuple(min(p[i] for p in self.points) for i in range(self.d))
        highs = tuple(max(p[i] for p in self.points) for i in range(self.d))
        return Point(lows), Point(highs)

    def as_floats(self):
        return np.array([[float(c) for c in p] for p in self.points], dtype=float).reshape(len(self), self.d)


def _affine(point, matrix, offset):
    return Point(tuple(sum((row[j] * point[j] for j in range(point.d)), Fraction(0)) + offset[i]
                       for i, row in enumerate(matrix)))


@dataclass(frozen=True)
class Embedding:
    """Bijection from hypergraph vertices 0..n-1 onto ``points``."""

    points: PointSet

    @classmethod
    def from_bijection(cls, points, permutation):
        if sorted(permutation) != list(range(len(points))):
            raise ValidationProblem("permutation is not a bijection onto the point set")
        return cls(points.permuted(permutation))

    @property
    def n(self):
        return len(self.points)

    def __getitem__(self, vertex):
        return self.points[vertex]


def random_point_set(n, rng, denominator=10_000, disk=False, max_attempts=1000):
    """Seeded general-position point set in the unit square (or unit disk) with coordinates k/denominator."""
    for _ in range(max_attempts):
        rows = []
        while len(rows) < n:
            x, y = rng.integers(0, denominator + 1, size=2)
            if disk:
                cx, cy = 2 * int(x) - denominator, 2 * int(y) - denominator
                if cx * cx + cy * cy > denominator * denominator:
                    continue
            rows.append((Fraction(int(x), denominator), Fraction(int(y), denominator)))
        points = PointSet.from_rows(rows, 2)
        if len(set(points.points)) == n and points.general_position:
            return points
    raise ValidationProblem(f"no general-position sample of {n} points after {max_attempts} attempts")
