"""Upper estimates of c(K_n^3) from structured point families and annealed embeddings."""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from overlap_lab.conf import lab_setting
from overlap_lab.exceptions import DimensionMismatch, ValidationProblem

from geometry.overlap import deep_point_complete
from geometry.points import Point, PointSet, snap
from hypergraphs.structures import complete_hypergraph

from .embeddings import adversarial_embedding

logger = logging.getLogger(__name__)

BOROS_FUREDI_LIMIT = Fraction(2, 9)


@dataclass
class OverlapEstimate:
    """Bounds on c(H) for one instance.

    ``upper`` is the exact overlap of the witness embedding, so it always bounds c(H) from
    above. ``lower`` is only filled when the instance is small enough to settle exactly.
    """

    n: int
    d: int
    upper: Fraction
    upper_method: str
    witness: PointSet
    witness_point: Point
    witness_family: str
    lower: Fraction = None
    lower_method: str = 'none'
    candidates: list = field(default_factory=list)

    @property
    def settled(self):
        return self.lower is not None and self.lower == self.upper


def _valid(points):
    return len(set(points.points)) == len(points) and points.general_position


def _convex(n):
    return PointSet.from_rows([(i, i * i) for i in range(n)], 2)


def _perturbed_grid(n):
    side = math.ceil(math.sqrt(n))
    rng = np.random.default_rng(n)
    jitter = rng.uniform(-0.2, 0.2, size=(side * side, 2))
    rows = [(i + snap(jitter[i * side + j, 0], 1000), j + snap(jitter[i * side + j, 1], 1000))
            for i in range(side) for j in range(side)]
    return PointSet.from_rows(rows[:n], 2)


def _two_clusters(n):
    first = n // 2
    rows = [(Fraction(i, 100), Fraction(i * i, 10_000)) for i in range(first)]
    rows += [(1 + Fraction(j, 100), 1 - Fraction(j * j, 10_000) + Fraction(1, 7)) for j in range(n - first)]
    return PointSet.from_rows(rows, 2)


def _nested_triangles(n):
    rows = []
    for idx in range(n):
        layer, corner = divmod(idx, 3)
        angle = 2 * math.pi * corner / 3 + 0.37 * layer
        radius = layer + 1
        rows.append((snap(radius * math.cos(angle), 2 ** 12), snap(radius * math.sin(angle), 2 ** 12)))
    return PointSet.from_rows(rows, 2)


FAMILIES = (
    ('convex', _convex),
    ('perturbed-grid', _perturbed_grid),
    ('two-clusters', _two_clusters),
    ('nested-triangles', _nested_triangles),
)


def structured_family(n):
    """Named planar point sets of size n; families that come out degenerate are left out."""
    if n < 3:
        raise ValidationProblem("structured families need at least three points")
    family = []
    for name, build in FAMILIES:
        points = build(n)
        if _valid(points):
            family.append((name, points))
        else:
            logger.debug(f"Structured family {name} degenerates at n={n}, skipped")
    return family


def _exact_lower(n):
    # every triangle of four points meets the diagonal crossing or the inner point
    if n <= 4:
        return Fraction(1), 'exhaustive'
    return None, 'none'


def estimate_c_complete(n, d, cfg):
    """Smallest deep-point fraction over the structured family and the annealed embeddings."""
    if d != 2:
        raise DimensionMismatch("c(K_n^{d+1}) is only estimated in the plane")
    candidates = []
    for name, points in structured_family(n):
        report = deep_point_complete(points)
        candidates.append((report.fraction, name, points, report.witness))
    if n >= 4 and cfg.steps > 0:
        found = adversarial_embedding(complete_hypergraph(n, 3), cfg)
        candidates.append((found.fraction, 'annealed', found.embedding, found.witness))
    if not candidates:
        raise ValidationProblem(f"no general-position candidate embedding for n={n}")
    upper, family, witness, point = min(candidates, key=lambda c: c[0])
    lower, lower_method = _exact_lower(n)
    estimate = OverlapEstimate(n, d, upper, 'annealed' if family == 'annealed' else 'structured-family',
                               witness, point, family, lower, lower_method,
                               [(name, fraction) for fraction, name, _, _ in candidates])
    logger.info(f"c(K_{n}^3) <= {estimate.upper} ({float(estimate.upper):.4f}) from {family}")
    return estimate


@dataclass(frozen=True)
class TrendRow:
    n: int
    upper: Fraction
    method: str
    family: str


def trend_table(ns, cfg):
    """One row per n; the upper estimates are expected to drift down toward 2/9."""
    rows = []
    for n in ns:
        estimate = estimate_c_complete(n, 2, cfg)
        rows.append(TrendRow(n, estimate.upper, estimate.upper_method, estimate.witness_family))
    return rows


@dataclass(frozen=True)
class DuplicationCheck:
    m: int
    before: Fraction
    after: Fraction
    degenerate: Fraction
    offset: Fraction

    @property
    def passed(self):
        return self.after <= self.before + self.degenerate


def duplicated(points, m, offset):
    rows = [(p.x + offset * j, p.y + offset * j * j) for p in points for j in range(m)]
    return PointSet.from_rows(rows, 2)


def point_duplication_check(points, m, offset=None, attempts=20):
    """Blow every point up into a tight cluster of m and compare deep-point fractions.

    Only triples from three different clusters approximate an original triangle, so the
    deep-point fraction may grow by at most the share of the other triples.
    """
    if m < 1:
        raise ValidationProblem("the cluster size must be at least 1")
    offset = Fraction(1, lab_setting('SNAP_DENOMINATOR')) if offset is None else Fraction(offset)
    n = len(points)
    for _ in range(attempts):
        grown = duplicated(points, m, offset)
        if _valid(grown):
            break
        offset /= 3
    else:
        raise ValidationProblem(f"no general-position duplication of {n} points into clusters of {m}")
    before = deep_point_complete(points).fraction
    after = deep_point_complete(grown).fraction
    degenerate = 1 - Fraction(m ** 3 * comb(n, 3), comb(n * m, 3))
    check = DuplicationCheck(m, before, after, degenerate, offset)
    if not check.passed:
        logger.warning(f"Duplication by {m} raised the deep-point fraction from {float(before):.4f} "
                       f"to {float(after):.4f}, more than the degenerate share {float(degenerate):.4f}")
    return check
