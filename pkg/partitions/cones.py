"""Radial cone partitions around a point and their exact homogeneity audit."""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from overlap_lab.exceptions import DimensionMismatch, ValidationProblem

from geometry.angular import sort_by_angle
from geometry.points import Point, PointSet
from geometry.predicates import cross, integer_coordinates, sign_array

logger = logging.getLogger(__name__)

EQUIPARTITION = 'equipartition'
CONES = 'cones'
GENERIC = 'generic'


def equipartition_sizes(n, k):
    if k < 1:
        raise ValidationProblem("the number of blocks must be positive")
    return [n // k + (1 if i < n % k else 0) for i in range(k)]


@dataclass(frozen=True)
class LabeledPartition:
    """Disjoint blocks of point indices covering ``points``."""

    points: PointSet
    blocks: tuple
    kind: str = GENERIC
    apex: Point = None
    boundaries: tuple = field(default=(), compare=False)

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(len(self.points))):
            raise ValidationProblem("blocks must be disjoint and cover every point")
        if self.kind in (EQUIPARTITION, CONES) and blocks:
            sizes = [len(b) for b in blocks]
            if max(sizes) - min(sizes) > 1:
                raise ValidationProblem(f"equipartition block sizes differ by more than one: {sizes}")
        object.__setattr__(self, 'blocks', blocks)

    @property
    def k(self):
        return len(self.blocks)

    def block_points(self, i):
        return [self.points[j] for j in self.blocks[i]]


def _boundary(u, v):
    """A direction strictly between u and v (counterclockwise from u), or u itself when they agree."""
    c = cross(u, v)
    if c > 0:
        return (u[0] + v[0], u[1] + v[1])
    if c == 0 and u[0] * v[0] + u[1] * v[1] > 0:
        return u
    return (-u[1], u[0])


def radial_homogeneous_partition(points, q, k):
    """k angular cones around q holding consecutive runs of the angular order (sizes differ by <= 1)."""
    pts = points if isinstance(points, PointSet) else PointSet(tuple(points))
    q = q if isinstance(q, Point) else Point(tuple(q))
    if pts.d != 2:
        raise DimensionMismatch("radial cones are planar")
    if any(p == q for p in pts):
        raise ValidationProblem(f"the centre {q} coincides with an input point")
    if not 1 <= k <= max(len(pts), 1):
        raise ValidationProblem(f"cannot cut {len(pts)} points into {k} non-empty cones")
    order = sort_by_angle(q, pts.points)
    blocks, start = [], 0
    for size in equipartition_sizes(len(pts), k):
        blocks.append(tuple(order[start:start + size]))
        start += size
    vectors = [(p[0] - q[0], p[1] - q[1]) for p in pts]
    boundaries = tuple(_boundary(vectors[blocks[i][-1]], vectors[blocks[(i + 1) % k][0]]) for i in range(k))
    return LabeledPartition(pts, tuple(blocks), CONES, q, boundaries)


@dataclass(frozen=True)
class RadialAudit:
    k: int
    triples: int
    nonhomogeneous: int
    all_contain: int

    @property
    def count_bound(self):
        return 2 * self.k * (self.k - 2)

    @property
    def fraction(self):
        return Fraction(self.nonhomogeneous, self.triples) if self.triples else Fraction(0)

    @property
    def fraction_bound(self):
        return Fraction(12, self.k - 1) if self.k > 1 else Fraction(1)


def _pair_tables(partition):
    """For cone blocks i, j: whether cross(a, b) >= 0 for all / some a in block i, b in block j."""
    q = partition.apex
    coords, _ = integer_coordinates(partition.points.points, extra=[q])
    vectors = coords[:-1] - coords[-1]
    signs = sign_array(vectors[:, 0][:, None] * vectors[:, 1][None, :]
                       - vectors[:, 1][:, None] * vectors[:, 0][None, :])
    nonneg = signs >= 0
    labels = np.zeros(len(partition.points), dtype=np.int64)
    for i, block in enumerate(partition.blocks):
        labels[list(block)] = i
    k = partition.k
    hits = np.zeros((k, k), dtype=np.int64)
    n = len(labels)
    np.add.at(hits, (np.repeat(labels, n), np.tile(labels, n)), nonneg.ravel().astype(np.int64))
    sizes = np.array([len(b) for b in partition.blocks], dtype=np.int64)
    return nonneg, hits == sizes[:, None] * sizes[None, :], hits > 0


def radial_audit(partition):
    """Exact homogeneity of every triple of cones.

    Blocks are consecutive in counterclockwise order, so for blocks i < j < l and a, b, c
    drawn from them the closed triangle abc contains the centre iff cross(a, b), cross(b, c)
    and cross(c, a) are all >= 0 (vectors taken from the centre).
    """
    if partition.kind != CONES or partition.apex is None:
        raise ValidationProblem("the radial audit needs a cone partition")
    k = partition.k
    if k < 3:
        return RadialAudit(k, 0, 0, 0)
    nonneg, every, some = _pair_tables(partition)
    i, j, l = np.meshgrid(np.arange(k), np.arange(k), np.arange(k), indexing='ij')
    ordered = (i < j) & (j < l)
    all_contain = ordered & every[i, j] & every[j, l] & every[l, i]
    open_cases = ordered & ~all_contain & some[i, j] & some[j, l] & some[l, i]
    mixed = 0
    for a, b, c in zip(*np.nonzero(open_cases)):
        A, B, C = (list(partition.blocks[x]) for x in (a, b, c))
        reach = (nonneg[np.ix_(A, B)].astype(np.int64) @ nonneg[np.ix_(B, C)].astype(np.int64)) > 0
        if (reach & nonneg[np.ix_(C, A)].T).any():
            mixed += 1
    return RadialAudit(k=k, triples=comb(k, 3), nonhomogeneous=mixed, all_contain=int(all_contain.sum()))
