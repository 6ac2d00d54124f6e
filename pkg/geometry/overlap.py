"""Overlap number evaluation: the largest fraction of hyperedge simplices sharing a point."""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from overlap_lab.conf import lab_setting, resolve
from overlap_lab.exceptions import (
    DimensionMismatch, GeneralPositionError, InvariantViolation, ValidationProblem,
)

from .arrangement import candidate_points, containment_matrix
from .depth import simplicial_depth
from .points import Embedding, Point, PointSet, snap
from .predicates import area_table, integer_coordinates, point_in_simplex, sign_array

logger = logging.getLogger(__name__)

EXACT_ARRANGEMENT = 'exact-arrangement'
GRID = 'grid'
MONTE_CARLO = 'monte-carlo'
METHODS = ('auto', 'sweep', 'candidates', 'grid', 'monte-carlo')


@dataclass(frozen=True)
class OverlapReport:
    """Deepest point found for one embedding.

    ``method`` is one of exact-arrangement / grid / monte-carlo; the last two are lower
    estimates of the true maximum (``lower_bound`` is then True). ``coincident`` flags a
    witness equal to an embedded vertex, where all incident closed simplices are counted.
    """

    witness: Point
    covered: int
    total: int
    method: str
    provenance: str
    coincident: bool = False
    evaluated: int = 0
    notes: list = field(default_factory=list)

    @property
    def fraction(self):
        return Fraction(self.covered, self.total)

    @property
    def lower_bound(self):
        return self.method != EXACT_ARRANGEMENT


def _embedded_points(embedding):
    if isinstance(embedding, Embedding):
        return embedding.points
    if isinstance(embedding, PointSet):
        return embedding
    return PointSet(tuple(embedding))


def _validated(hypergraph, embedding):
    points = _embedded_points(embedding)
    if len(points) != hypergraph.n:
        raise DimensionMismatch(f"embedding has {len(points)} points for {hypergraph.n} vertices")
    if hypergraph.arity != points.d + 1:
        raise DimensionMismatch(
            f"{hypergraph.arity}-uniform hyperedges do not span simplices in dimension {points.d}")
    if not hypergraph.edges:
        raise ValidationProblem("overlap is undefined for a hypergraph without hyperedges")
    if not points.general_position:
        raise GeneralPositionError("the embedding is not in general position")
    return points


def overlap_value(hypergraph, embedding, method='auto', rng=None, samples=None, grid_size=None):
    """Maximum over q of the fraction of hyperedges whose closed simplex contains q.

    In the plane ``sweep`` (the default) and ``candidates`` are exact; ``grid`` and
    ``monte-carlo`` only give lower estimates. Dimension 3 and up is Monte Carlo only.
    """
    if method not in METHODS:
        raise ValidationProblem(f"unknown overlap method {method!r}")
    points = _validated(hypergraph, embedding)
    edges = [tuple(e) for e in hypergraph.edges]
    if method == 'auto':
        method = 'sweep' if points.d == 2 else 'monte-carlo'
    if points.d != 2 and method != 'monte-carlo':
        raise DimensionMismatch(f"method {method!r} needs a planar embedding; use monte-carlo")
    if method == 'sweep':
        return _sweep(points, edges)
    if method == 'candidates':
        return _candidates(points, edges)
    if method == 'grid':
        return _grid(points, edges, resolve(grid_size, 'GRID_SIZE'))
    return _monte_carlo(points, edges, rng, resolve(samples, 'MONTE_CARLO_SAMPLES'))


def _membership(n, edges):
    table = np.zeros((n, n, n), dtype=bool)
    arr = np.asarray(edges, dtype=np.int64)
    for x, y, z in itertools.permutations(range(3)):
        table[arr[:, x], arr[:, y], arr[:, z]] = True
    return table


def vertex_coverage(points, edges):
    """Closed coverage at every embedded vertex: its degree plus the simplices strictly around it."""
    coords, _ = integer_coordinates(points)
    signs = sign_array(area_table(coords))
    arr = np.asarray(edges, dtype=np.int64)
    a, b, c = arr.T
    base = signs[a, b, c][:, None]
    inside = (signs[a, b, :] == base) & (signs[b, c, :] == base) & (signs[c, a, :] == base)
    degree = np.bincount(arr.ravel(), minlength=len(points))
    return degree + inside.sum(axis=0)


def _sweep(points, edges):
    """Exact maximum by walking along every hyperedge side.

    Closed containment makes the coverage upper semicontinuous, so its maximum sits at an
    embedded vertex or at a crossing of two sides. Along a side the count only changes at
    crossings, where the simplices on the far side of the crossed side switch in.
    """
    n = len(points)
    pts = points.points
    coords, _ = integer_coordinates(pts)
    areas = area_table(coords)
    signs = sign_array(areas)
    member = _membership(n, edges)

    covered = vertex_coverage(pts, edges)
    best = int(covered.max())
    best_vertex = int(covered.argmax())
    witness, coincident = pts[best_vertex], True
    strict = covered - np.bincount(np.asarray(edges).ravel(), minlength=n)

    up = (member & (signs > 0)).sum(axis=2)
    down = (member & (signs < 0)).sum(axis=2)
    sides = sorted({tuple(sorted(pair)) for e in edges for pair in itertools.combinations(e, 2)})
    ks = np.array([s[0] for s in sides], dtype=np.int64)
    ls = np.array([s[1] for s in sides], dtype=np.int64)

    crossings = 0
    for i, j in sides:
        row = signs[i]
        wedge = member[i] & (row[:, j][:, None] == row[j, :][None, :]) & (row[j, :][None, :] == row)
        level = int(member[i, j].sum()) + int(wedge.sum()) // 2 + int(strict[i])

        mask = (ks != i) & (ks != j) & (ls != i) & (ls != j)
        mask &= signs[i, j, ks] * signs[i, j, ls] < 0
        mask &= signs[ks, ls, i] * signs[ks, ls, j] < 0
        if not mask.any():
            continue
        k, l = ks[mask], ls[mask]
        toward_i = signs[k, l, i] > 0
        leaving = np.where(toward_i, up[k, l], down[k, l])
        entering = np.where(toward_i, down[k, l], up[k, l])
        if level + int(entering.sum()) <= best:
            continue
        num, den = areas[k, l, i], areas[k, l, i] - areas[k, l, j]
        events = sorted(
            (Fraction(int(p), int(q)), int(out), int(inc))
            for p, q, out, inc in zip(num, den, leaving, entering)
        )
        crossings += len(events)
        for lam, group in itertools.groupby(events, key=lambda event: event[0]):
            group = list(group)
            gained = sum(inc for _, _, inc in group)
            if level + gained > best:
                best = level + gained
                start, end = pts[i], pts[j]
                witness = start + (end - start).scale(lam)
                coincident = False
            level += gained - sum(out for _, out, _ in group)

    logger.debug(f"Side sweep over {len(sides)} sides visited {crossings} crossings, best {best}/{len(edges)}")
    return OverlapReport(witness=witness, covered=best, total=len(edges), method=EXACT_ARRANGEMENT,
                         provenance='side-sweep', coincident=coincident, evaluated=n + crossings)


def _best_row(points, edges, queries, provenance, method, chunk=4096):
    best, best_q = -1, None
    for start in range(0, len(queries), chunk):
        batch = queries[start:start + chunk]
        counts = containment_matrix(points, edges, batch).sum(axis=1)
        idx = int(counts.argmax())
        if counts[idx] > best:
            best, best_q = int(counts[idx]), batch[idx]
    return OverlapReport(witness=best_q, covered=best, total=len(edges), method=method,
                         provenance=provenance, coincident=best_q in set(points.points),
                         evaluated=len(queries))


def _candidates(points, edges):
    queries = list(points.points) + candidate_points(points, include_lower_faces=True)
    return _best_row(points, edges, queries, 'arrangement-candidates', EXACT_ARRANGEMENT)


def grid_points(points, size):
    lo, hi = points.bounding_box()
    steps = max(size - 1, 1)
    xs = [lo[0] + (hi[0] - lo[0]) * Fraction(k, steps) for k in range(size)]
    ys = [lo[1] + (hi[1] - lo[1]) * Fraction(k, steps) for k in range(size)]
    return [Point((x, y)) for x in xs for y in ys]


def _grid(points, edges, size):
    queries = grid_points(points, size)
    return _best_row(points, edges, queries, f'grid {size}x{size}', GRID)


def _monte_carlo(points, edges, rng, samples, verify=8):
    if rng is None:
        rng = np.random.default_rng(lab_setting('DEFAULT_SEED'))
    denominator = lab_setting('SNAP_DENOMINATOR')
    X = points.as_floats()
    E = np.asarray(edges, dtype=np.int64)
    d = points.d
    base = X[E[:, 0]]
    frames = (X[E[:, 1:]] - base[:, None, :]).transpose(0, 2, 1)
    inverse = np.linalg.inv(frames)

    picks = rng.integers(0, len(E), size=samples)
    weights = rng.dirichlet(np.ones(d + 1), size=samples)
    sample_points = np.einsum('si,sij->sj', weights, X[E[picks]])
    snapped = [Point(tuple(snap(v, denominator) for v in row)) for row in sample_points]

    counts = np.zeros(samples, dtype=np.int64)
    for start in range(0, samples, 256):
        chunk = np.array([[float(v) for v in p] for p in snapped[start:start + 256]])
        lam = np.einsum('mij,msj->msi', inverse, chunk[None, :, :] - base[:, None, :])
        inside = (lam >= -1e-9).all(axis=2) & (lam.sum(axis=2) <= 1 + 1e-9)
        counts[start:start + len(chunk)] = inside.sum(axis=0)

    best, witness = -1, None
    for idx in np.argsort(-counts, kind='stable')[:verify]:
        q = snapped[int(idx)]
        exact = sum(1 for e in edges if point_in_simplex(q, [points[v] for v in e]))
        if exact > best:
            best, witness = exact, q
    return OverlapReport(witness=witness, covered=best, total=len(edges), method=MONTE_CARLO,
                         provenance=f'monte-carlo {samples} samples', evaluated=samples)


def deep_point_complete(points):
    """Deepest point of the complete 3-uniform hypergraph on a planar point set."""
    from hypergraphs.structures import complete_hypergraph

    points = _embedded_points(points)
    if points.d != 2:
        raise DimensionMismatch("deep points of complete hypergraphs are computed in the plane")
    if len(points) < 3:
        raise ValidationProblem("at least three points are needed for a triangle")
    report = overlap_value(complete_hypergraph(len(points), 3), points)
    depth = simplicial_depth(report.witness, points.points)
    if depth != report.covered:
        raise InvariantViolation(
            f"sweep coverage {report.covered} disagrees with simplicial depth {depth} at {report.witness}")
    return report
