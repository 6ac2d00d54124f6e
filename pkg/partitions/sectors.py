"""Six-sector partitions by three concurrent lines, and the 8-of-20 triangle count."""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from overlap_lab.conf import resolve
from overlap_lab.exceptions import (
    BudgetExhausted, DimensionMismatch, GeneralPositionError, InvariantViolation, PreconditionError,
    ValidationProblem,
)

from geometry.angular import folded, sort_by_angle
from geometry.arrangement import candidate_points
from geometry.depth import closed_triangle_contains
from geometry.points import Point, PointSet, centroid
from geometry.predicates import cross

logger = logging.getLogger(__name__)


def sector_rays(directions):
    """Six boundary rays d1, d2, d3, -d1, -d2, -d3; they must be in counterclockwise order."""
    d1, d2, d3 = (tuple(Fraction(c) for c in d) for d in directions)
    rays = [d1, d2, d3, (-d1[0], -d1[1]), (-d2[0], -d2[1]), (-d3[0], -d3[1])]
    for i in range(6):
        if cross(rays[i], rays[(i + 1) % 6]) <= 0:
            raise ValidationProblem("line directions must be distinct and ordered counterclockwise")
    return rays


def assign_sector(apex, rays, point):
    """Index i with the direction of ``point`` in [ray_i, ray_{i+1}).

    A point on a boundary ray goes to the sector counterclockwise of that ray.
    """
    v = (point[0] - apex[0], point[1] - apex[1])
    if v == (0, 0):
        raise ValidationProblem(f"point {point} coincides with the apex")
    for i, ray in enumerate(rays):
        nxt = rays[(i + 1) % len(rays)]
        on_ray = cross(ray, v) == 0 and ray[0] * v[0] + ray[1] * v[1] > 0
        if on_ray or (cross(ray, v) > 0 and cross(v, nxt) > 0):
            return i
    raise InvariantViolation(f"no sector contains direction {v}")


@dataclass(frozen=True)
class SectorPartition:
    """Three concurrent lines through ``apex`` and the six sectors they cut (point indices)."""

    points: PointSet
    apex: Point
    directions: tuple
    sectors: tuple

    @property
    def rays(self):
        return sector_rays(self.directions)

    @property
    def counts(self):
        return tuple(len(s) for s in self.sectors)

    @property
    def imbalance(self):
        return _score(self.counts, len(self.points))[0]

    @classmethod
    def from_directions(cls, points, apex, directions):
        rays = sector_rays(directions)
        sectors = [[] for _ in range(6)]
        for idx, p in enumerate(points):
            sectors[assign_sector(apex, rays, p)].append(idx)
        return cls(points, Point(tuple(apex)), tuple(tuple(Fraction(c) for c in d) for d in directions),
                   tuple(tuple(s) for s in sectors))


def _score(counts, n):
    lo, hi = n // 6, -(-n // 6)
    deviation = max(max(lo - s, s - hi, 0) for s in counts)
    return deviation, sum(abs(6 * s - n) for s in counts)


def _folded_groups(apex, points):
    """Point directions folded into [0, pi), grouped by equal angle: [vector, up, down]."""
    entries = []
    for p in points:
        v = (p[0] - apex[0], p[1] - apex[1])
        if v == (0, 0):
            return None
        f, flipped = folded(v)
        entries.append((f, not flipped))
    groups = []
    for i in sort_by_angle((0, 0), [f for f, _ in entries]):
        f, up = entries[i]
        if groups and cross(groups[-1][0], f) == 0:
            groups[-1][1 if up else 2] += 1
        else:
            groups.append([f, int(up), int(not up)])
    return groups


def _gap_direction(groups, g):
    m = len(groups)
    if g < m - 1:
        u, v = groups[g][0], groups[g + 1][0]
        return (u[0] + v[0], u[1] + v[1])
    if m == 1:
        u = groups[0][0]
        return (-u[1], u[0])
    u, v = groups[m - 1][0], groups[0][0]
    return (u[0] - v[0], u[1] - v[1])


def best_lines(apex, points):
    """Best three concurrent lines through ``apex`` avoiding every point.

    Returns (score, directions) or None when fewer than three free gaps exist.
    """
    groups = _folded_groups(apex, points)
    if groups is None or len(groups) < 3:
        return None
    n = len(points)
    lo, hi = n // 6, -(-n // 6)
    m = len(groups)
    up, down = [0], [0]
    for _, u, d in groups:
        up.append(up[-1] + u)
        down.append(down[-1] + d)

    best = None
    best_dev = n + 1
    for a in range(m - 2):
        for b in range(a + 1, m - 1):
            s0, s3 = up[b + 1] - up[a + 1], down[b + 1] - down[a + 1]
            if s0 > hi + best_dev or s3 > hi + best_dev:
                break
            if s0 < lo - best_dev or s3 < lo - best_dev:
                continue
            for c in range(b + 1, m):
                s1, s4 = up[c + 1] - up[b + 1], down[c + 1] - down[b + 1]
                if s1 > hi + best_dev or s4 > hi + best_dev:
                    break
                s2 = up[m] - up[c + 1] + down[a + 1]
                s5 = down[m] - down[c + 1] + up[a + 1]
                score = _score((s0, s1, s2, s3, s4, s5), n)
                if best is None or score < best[0]:
                    best = (score, (a, b, c))
                    best_dev = score[0]
                    if best_dev == 0:
                        return _finish(groups, best)
    return _finish(groups, best) if best else None


def _finish(groups, best):
    score, cuts = best
    return score, tuple(_gap_direction(groups, g) for g in cuts)


def halving_directions(pts):
    """Directions strictly between consecutive pair directions over [0, pi), then the same reversed."""
    pair_dirs = [folded((q[0] - p[0], q[1] - p[1]))[0] for p, q in itertools.combinations(pts, 2)]
    ordered = [pair_dirs[i] for i in sort_by_angle((0, 0), pair_dirs)]
    distinct = [v for i, v in enumerate(ordered) if i == 0 or cross(ordered[i - 1], v) != 0]
    if len(distinct) < 2:
        return []
    gaps = []
    for g in range(len(distinct)):
        u, v = distinct[g], distinct[(g + 1) % len(distinct)]
        gaps.append((u[0] + v[0], u[1] + v[1]) if g + 1 < len(distinct) else (u[0] - v[0], u[1] - v[1]))
    return gaps + [(-x, -y) for x, y in gaps]


def halving_line_apexes(pts, theta):
    """One apex per segment of the halving line with direction theta cut by the pair lines, in order along theta."""
    n = len(pts)
    offsets = sorted(cross(theta, p) for p in pts)
    level = (offsets[n // 2 - 1] + offsets[n // 2]) / 2
    norm = theta[0] ** 2 + theta[1] ** 2
    base = (-theta[1] * level / norm, theta[0] * level / norm)
    params = set()
    for p, q in itertools.combinations(pts, 2):
        w = (q[0] - p[0], q[1] - p[1])
        offset = (p[0] - base[0], p[1] - base[1])
        params.add(Fraction(cross(offset, w)) / cross(theta, w))
    params = sorted(params)
    positions = [params[0] - 1] + [(s + t) / 2 for s, t in zip(params, params[1:])] + [params[-1] + 1]
    return [Point((base[0] + s * theta[0], base[1] + s * theta[1])) for s in positions]


def _angular_cmp(u, v):
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def opposite_balance(apex, theta, pts):
    """Split the half left of theta into thirds by two lines through apex and count the other half.

    Returns (s3 - s5, 3 s4 - |lower|) where s3, s4, s5 are the lower points in the sectors
    opposite the first, middle and last upper third.
    """
    upper, lower = [], []
    for p in pts:
        w = (p[0] - apex[0], p[1] - apex[1])
        (upper if cross(theta, w) > 0 else lower).append(w)
    upper.sort(key=cmp_to_key(_angular_cmp))
    k = len(upper)
    first = k // 3
    second = first + (k - first) // 2
    if first < 1 or second >= k:
        raise PreconditionError(f"{k} points above the halving line cannot be split in thirds")
    d2 = (upper[first - 1][0] + upper[first][0], upper[first - 1][1] + upper[first][1])
    d3 = (upper[second - 1][0] + upper[second][0], upper[second - 1][1] + upper[second][1])
    s3 = sum(1 for w in lower if cross((-w[0], -w[1]), d2) > 0)
    s5 = sum(1 for w in lower if cross(d3, (-w[0], -w[1])) > 0)
    s4 = len(lower) - s3 - s5
    return s3 - s5, 3 * s4 - len(lower)


def balanced_crossing(pts, theta):
    """Binary search along the halving line for the sign change of s3 - s5.

    The first apex sees every lower point opposite the last third and the final apex sees
    them all opposite the first, so a change of sign always exists. Returns the apexes
    around it and the middle-sector imbalance there.
    """
    apexes = halving_line_apexes(pts, theta)
    lo, hi = 0, len(apexes) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        sign = opposite_balance(apexes[mid], theta, pts)[0]
        if sign == 0:
            lo = hi = mid
            break
        if sign < 0:
            lo = mid
        else:
            hi = mid
    window = []
    for i in (lo, hi, lo - 1, hi + 1):
        if 0 <= i < len(apexes) and apexes[i] not in window:
            window.append(apexes[i])
    return window, opposite_balance(apexes[lo], theta, pts)[1]


def _halving_apexes(pts, budget):
    """Apexes from ``budget`` halving-line directions, nearest the middle-sector sign change first.

    Reversing theta swaps the roles of the two halves, so the middle imbalance at the
    balanced apex changes sign over a half turn and a binary search over directions
    locates where it does.
    """
    directions = halving_directions(pts)
    if not directions:
        return
    total, half = len(directions), len(directions) // 2
    crossings = {}

    def crossing(i):
        i %= total
        if i not in crossings:
            crossings[i] = balanced_crossing(pts, directions[i])
        return crossings[i]

    lo, hi = 0, half
    start, end = crossing(lo)[1], crossing(hi)[1]
    if start * end < 0:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            value = crossing(mid)[1]
            if value == 0:
                lo = hi = mid
                break
            if (value < 0) == (start < 0):
                lo = mid
            else:
                hi = mid
    elif end == 0:
        lo = hi = half
    visited = set()
    for step in range(total):
        for i in (lo - step, hi + step):
            if i % total in visited:
                continue
            if len(visited) >= budget:
                return
            visited.add(i % total)
            yield from crossing(i)[0]


def ceder_partition(points, exhaustive_limit=None, direction_budget=None):
    """Three concurrent lines cutting the plane into six sectors of about n/6 points each.

    Small sets try an apex in every cell of the pair-line arrangement. Larger sets binary-search
    each halving line for the apex balancing the two outer opposite sectors, and binary-search
    the halving direction for the sign change of the middle one; the ``direction_budget``
    directions nearest that change are tried. Sector sizes within one of [n/6] are accepted;
    otherwise BudgetExhausted carries the best partition found.
    """
    pts = points if isinstance(points, PointSet) else PointSet(tuple(points))
    n = len(pts)
    if pts.d != 2:
        raise DimensionMismatch("sector partitions are planar")
    if n < 6:
        raise ValidationProblem("at least six points are needed")
    if not pts.general_position:
        raise GeneralPositionError("sector partitions need points in general position")
    limit = resolve(exhaustive_limit, 'CEDER_EXHAUSTIVE_LIMIT')
    budget = resolve(direction_budget, 'CEDER_DIRECTION_BUDGET')

    if n <= limit:
        center = centroid(pts.points)
        cx, cy = float(center[0]), float(center[1])
        apexes = sorted(candidate_points(pts),
                        key=lambda c: (float(c[0]) - cx) ** 2 + (float(c[1]) - cy) ** 2)
        source = 'arrangement-cells'
    else:
        apexes = _halving_apexes(pts.points, budget)
        source = 'halving-sweep'

    best = None
    tried = 0
    for apex in apexes:
        tried += 1
        found = best_lines(apex, pts.points)
        if found is None:
            continue
        if best is None or found[0] < best[0]:
            best = (found[0], apex, found[1])
            if found[0][0] == 0:
                break
    if best is None:
        raise BudgetExhausted("no admissible apex found for a sector partition", attempts=tried)
    (deviation, _), apex, directions = best
    partition = SectorPartition.from_directions(pts, apex, directions)
    if deviation > 1:
        raise BudgetExhausted(f"best sector partition is off by {deviation} from n/6 after {tried} apexes",
                              attempts=tried, partial=partition)
    if deviation:
        logger.warning(f"Sector partition of {n} points within one of n/6 only: {partition.counts}")
    logger.info(f"Sector partition found via {source} after {tried} apexes: counts {partition.counts}")
    return partition


def bukh_check(apex, six, sector_assignment):
    """Closed triangles among six points (one per sector around ``apex``) that contain the apex.

    At least 8 of the 20 always do; fewer raises InvariantViolation.
    """
    six = [p if isinstance(p, Point) else Point(tuple(p)) for p in six]
    if len(six) != 6:
        raise ValidationProblem("exactly six points are required")
    if isinstance(sector_assignment, SectorPartition):
        rays = sector_assignment.rays
        labels = [assign_sector(apex, rays, p) for p in six]
    else:
        labels = list(sector_assignment)
    if sorted(labels) != list(range(6)):
        raise ValidationProblem(f"points are not one per sector: sectors {labels}")
    count = sum(1 for a, b, c in itertools.combinations(six, 3) if closed_triangle_contains(apex, a, b, c))
    if count < 8:
        raise InvariantViolation(f"only {count} of 20 triangles contain the apex")
    return count
