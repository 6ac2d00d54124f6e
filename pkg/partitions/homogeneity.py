"""Homogeneity of point-set tuples around q: testing, ham-sandwich halving, extraction, audits."""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np

from overlap_lab.conf import lab_setting, resolve
from overlap_lab.exceptions import (
    DimensionMismatch, InvariantViolation, PreconditionError, ValidationProblem,
)

from geometry.angular import sort_by_angle
from geometry.arrangement import Line
from geometry.depth import closed_triangle_contains
from geometry.points import Point, snap
from geometry.predicates import cross, point_in_simplex, simplex_orientation

from .sectors import _folded_groups, _gap_direction

logger = logging.getLogger(__name__)

ALL_CONTAIN = 'all-contain'
NONE_CONTAIN = 'none-contain'
MIXED = 'mixed'
UNKNOWN = 'unknown'


@dataclass(frozen=True)
class HomogeneityResult:
    status: str
    method: str
    checked: int = 0

    @property
    def homogeneous(self):
        """True / False, or None when the status is unknown."""
        if self.status == UNKNOWN:
            return None
        return self.status != MIXED


def _as_point(p):
    return p if isinstance(p, Point) else Point(tuple(p))


def _contains(q, simplex):
    if len(q) == 2:
        return closed_triangle_contains(q, *simplex)
    if simplex_orientation(list(simplex)) == 0:
        return False
    return point_in_simplex(q, simplex)


def _vectors(q, points):
    return [(p[0] - q[0], p[1] - q[1]) for p in points]


def _fits_half_plane(vectors, closed):
    """Whether all vectors lie in one half-plane through the origin (closed or open)."""
    if not vectors:
        return True
    order = sort_by_angle((0, 0), vectors)
    ordered = [vectors[i] for i in order]
    distinct = [v for i, v in enumerate(ordered)
                if i == 0 or not (cross(ordered[i - 1], v) == 0 and ordered[i - 1][0] * v[0] + ordered[i - 1][1] * v[1] > 0)]
    if len(distinct) == 1:
        return True
    for u, v in zip(distinct, distinct[1:] + distinct[:1]):
        c = cross(u, v)
        if c < 0 or (closed and c == 0 and u[0] * v[0] + u[1] * v[1] < 0):
            return True
    return False


def _separation_status(q, sets):
    vectors = [_vectors(q, s) for s in sets]
    if any(v == (0, 0) for vs in vectors for v in vs):
        return UNKNOWN
    if _fits_half_plane([v for vs in vectors for v in vs], closed=False):
        return NONE_CONTAIN
    for i in range(len(sets)):
        mixed = list(vectors[i])
        for j in range(len(sets)):
            if j != i:
                mixed.extend((-x, -y) for x, y in vectors[j])
        if not _fits_half_plane(mixed, closed=True):
            return UNKNOWN
    return ALL_CONTAIN


def homogeneity_test(q, sets, budget=None, method='auto'):
    """Whether every transversal simplex of ``sets`` contains q, or none does.

    Brute force when the number of transversals fits the budget; otherwise (planar only) a
    half-plane separation certificate, falling back to an explicit 'unknown'.
    """
    q = _as_point(q)
    sets = [[_as_point(p) for p in s] for s in sets]
    d = q.d
    if len(sets) != d + 1:
        raise DimensionMismatch(f"{d + 1} sets are needed in dimension {d}")
    if any(not s for s in sets):
        raise ValidationProblem("every set must be non-empty")
    if any(p.d != d for s in sets for p in s):
        raise DimensionMismatch("points and q must share a dimension")
    budget = resolve(budget, 'BRUTE_FORCE_BUDGET')
    total = prod(len(s) for s in sets)
    if method == 'brute' or (method == 'auto' and total <= budget):
        seen_in = seen_out = False
        checked = 0
        for simplex in itertools.product(*sets):
            checked += 1
            if _contains(q, simplex):
                seen_in = True
            else:
                seen_out = True
            if seen_in and seen_out:
                return HomogeneityResult(MIXED, 'brute-force', checked)
        return HomogeneityResult(ALL_CONTAIN if seen_in else NONE_CONTAIN, 'brute-force', checked)
    if d != 2:
        return HomogeneityResult(UNKNOWN, 'separation')
    return HomogeneityResult(_separation_status(q, sets), 'separation')


def ham_sandwich_line_through(q, points):
    """A line through q with at most floor(|S|/2) points of S strictly on each side.

    Lines avoiding S are preferred; among equals the first in angular order wins.
    """
    q = _as_point(q)
    if q.d != 2:
        raise DimensionMismatch("halving lines through a point are planar")
    points = [_as_point(p) for p in points]
    if any(p == q for p in points):
        raise ValidationProblem(f"{q} belongs to the set being halved")
    if not points:
        return Line(q, (Fraction(1), Fraction(0)))
    half = len(points) // 2
    groups = _folded_groups(q, points)
    m = len(groups)
    up_after = [sum(g[1] for g in groups[i + 1:]) for i in range(m)]
    down_before = [sum(g[2] for g in groups[:i]) for i in range(m)]

    candidates = []
    for g in range(m):
        left = up_after[g] + down_before[g] + groups[g][2]
        if left <= half and len(points) - left <= half:
            candidates.append((0, _gap_direction(groups, g)))
    for g in range(m):
        on_line = groups[g][1] + groups[g][2]
        left = up_after[g] + down_before[g]
        if left <= half and len(points) - left - on_line <= half:
            candidates.append((on_line, groups[g][0]))
    if not candidates:
        raise InvariantViolation("no halving line through q")
    _, direction = min(candidates, key=lambda c: c[0])
    return Line(q, direction)


def _sides(line, points):
    left = [p for p in points if line.side(p) > 0]
    right = [p for p in points if line.side(p) < 0]
    return left, right


def _larger_side(left, right):
    if len(left) != len(right):
        return 1 if len(left) > len(right) else -1
    if not left:
        return 1
    return 1 if min(left) < min(right) else -1


def _separated(q, sets, subset):
    """Whether a line through q already has the sets of ``subset`` strictly on one side and the rest on the other."""
    if any(p == q for s in sets for p in s):
        return False
    vectors = [v for i in subset for v in _vectors(q, sets[i])]
    vectors += [(-x, -y) for i in range(len(sets)) if i not in subset for x, y in _vectors(q, sets[i])]
    return _fits_half_plane(vectors, closed=False)


@dataclass
class ExtractionResult:
    subsets: tuple
    status: HomogeneityResult
    steps: list = field(default_factory=list)
    exact: bool = True
    size_guarantee_met: bool = True

    @property
    def sizes(self):
        return tuple(len(s) for s in self.subsets)


def extract_homogeneous_subsets(q, sets, rng=None):
    """Shrink S_1..S_{d+1} to a homogeneous tuple around q by repeated halving.

    For each proper subset X of the indices, a line through q bisecting one set is used to
    put the sets of X on one side and the others on the opposite side (or all of them on a
    single side). Each kept part is the larger side of its set, so at most 2^{d+1} - 2 halvings
    happen. Planar input is exact; higher dimensions use random hyperplanes and are heuristic.
    """
    q = _as_point(q)
    sets = [[_as_point(p) for p in s] for s in sets]
    if len(sets) != q.d + 1:
        raise DimensionMismatch(f"{q.d + 1} sets are needed in dimension {q.d}")
    for i, j in itertools.combinations(range(len(sets)), 2):
        if set(sets[i]) & set(sets[j]):
            raise ValidationProblem("the sets must be pairwise disjoint")
    if any(len(s) < 128 for s in sets):
        logger.info(f"Extraction from sets of sizes {[len(s) for s in sets]}: below 128 the size guarantee may be empty")
    if q.d != 2:
        return _extract_heuristic(q, sets, rng)

    current = [list(s) for s in sets]
    steps = []
    status = homogeneity_test(q, current)
    if status.homogeneous:
        steps.append({'step': 'initial', 'status': status.status})
        return ExtractionResult(tuple(current), status, steps)

    subsets = [x for r in (1, 2) for x in itertools.combinations(range(3), r)]
    for subset in subsets:
        if _separated(q, current, subset):
            steps.append({'subset': list(subset), 'action': 'already-separated'})
            continue
        a = min(subset)
        b = min(i for i in range(3) if i not in subset)
        c = next(i for i in range(3) if i not in (a, b))
        line = ham_sandwich_line_through(q, current[c])
        side_a = _larger_side(*_sides(line, current[a]))
        side_b = _larger_side(*_sides(line, current[b]))
        if side_a == side_b:
            keep = {0: side_a, 1: side_a, 2: side_a}
        else:
            keep = {i: (side_a if i in subset else side_b) for i in range(3)}
        current = [[p for p in current[i] if line.side(p) == keep[i]] for i in range(3)]
        steps.append({'subset': list(subset), 'line': [str(v) for v in line.direction],
                      'sizes': [len(s) for s in current], 'one_side': side_a == side_b})
        if any(not s for s in current):
            raise PreconditionError(f"extraction emptied a set after {len(steps)} steps; the inputs are too small")
        if side_a == side_b:
            break

    status = homogeneity_test(q, current)
    if not status.homogeneous:
        raise InvariantViolation(f"extracted tuple is not homogeneous ({status.status})")
    met = all(len(y) >= len(s) // 64 - 8 for y, s in zip(current, sets))
    if not met:
        logger.warning(f"Extraction kept {[len(s) for s in current]} of {[len(s) for s in sets]}, below |S|/64 - 8")
    return ExtractionResult(tuple(current), status, steps, True, met)


def _extract_heuristic(q, sets, rng, tries=32):
    rng = rng if rng is not None else np.random.default_rng(lab_setting('DEFAULT_SEED'))
    denominator = lab_setting('SNAP_DENOMINATOR')
    h = len(sets)
    current = [list(s) for s in sets]
    steps = []

    def side(normal, p):
        value = sum(w * (x - y) for w, x, y in zip(normal, p, q))
        return (value > 0) - (value < 0)

    for r in range(1, h):
        for subset in itertools.combinations(range(h), r):
            best = None
            for _ in range(tries):
                normal = [snap(v, denominator) for v in rng.normal(size=q.d)]
                kept = [[p for p in current[i] if side(normal, p) == (1 if i in subset else -1)]
                        for i in range(h)]
                score = min(len(k) for k in kept)
                if best is None or score > best[0]:
                    best = (score, kept)
            if best[0] == 0:
                break
            current = best[1]
            steps.append({'subset': list(subset), 'sizes': [len(s) for s in current]})
    status = homogeneity_test(q, current) if all(current) else HomogeneityResult(UNKNOWN, 'heuristic')
    return ExtractionResult(tuple(current), status, steps, exact=False,
                            size_guarantee_met=all(len(y) >= len(s) // 64 - 8 for y, s in zip(current, sets)))


@dataclass(frozen=True)
class HomogeneityAudit:
    tuples: int
    homogeneous: int
    mixed: int
    unknown: int

    @property
    def fraction(self):
        return Fraction(self.homogeneous, self.tuples) if self.tuples else Fraction(1)

    @property
    def nonhomogeneous_fraction(self):
        return Fraction(self.mixed, self.tuples) if self.tuples else Fraction(0)


def homogeneity_audit(partition, q, budget=None):
    """Homogeneity of every (d+1)-tuple of blocks; unknown outcomes are counted separately."""
    q = _as_point(q)
    h = q.d + 1
    counts = {True: 0, False: 0, None: 0}
    tuples = 0
    for combo in itertools.combinations(range(partition.k), h):
        result = homogeneity_test(q, [partition.block_points(i) for i in combo], budget=budget)
        counts[result.homogeneous] += 1
        tuples += 1
    if counts[None]:
        logger.warning(f"Homogeneity audit left {counts[None]} of {tuples} tuples undecided")
    return HomogeneityAudit(tuples=tuples, homogeneous=counts[True], mixed=counts[False], unknown=counts[None])
