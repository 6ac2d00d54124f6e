"""Homogeneous covers of the geometric hypergraph H_q and the equal-size partitions built from them."""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from overlap_lab.conf import resolve
from overlap_lab.exceptions import (
    BudgetExhausted, DimensionMismatch, InvariantViolation, PreconditionError, ValidationProblem,
)

from geometry.arrangement import containment_matrix
from geometry.points import Point, PointSet
from hypergraphs.structures import Hypergraph
from partitions.cones import EQUIPARTITION, LabeledPartition, equipartition_sizes, radial_homogeneous_partition
from partitions.homogeneity import extract_homogeneous_subsets, homogeneity_audit, homogeneity_test

from .density import find_superregular

logger = logging.getLogger(__name__)

MAX_COVER_POINTS = 60


def geometric_hypergraph(points, q):
    """H_q: triples of points whose closed triangle contains q."""
    pts = points if isinstance(points, PointSet) else PointSet(tuple(points))
    if pts.d != 2:
        raise DimensionMismatch("the geometric hypergraph is built in the plane")
    triples = list(itertools.combinations(range(len(pts)), 3))
    if not triples:
        return Hypergraph(len(pts), 3, (), {'construction': 'geometric', 'q': [str(c) for c in q]})
    inside = containment_matrix(pts, triples, [q])[0]
    edges = tuple(t for t, hit in zip(triples, inside) if hit)
    return Hypergraph(len(pts), 3, edges, {'construction': 'geometric', 'q': [str(c) for c in q]})


@dataclass(frozen=True)
class CoverParameters:
    """Constants of the covering argument; the huge ones are kept as base-10 logarithms."""

    h: int
    c: Fraction
    epsilon: Fraction
    delta: Fraction
    gamma: Fraction
    log10_alpha: float
    log10_beta: float
    log10_L: float
    log10_M: float
    log10_K: float

    @property
    def beta(self):
        return 10.0 ** self.log10_beta


def cover_parameters(h, c, epsilon):
    c, epsilon = Fraction(c), Fraction(epsilon)
    if not (0 < c <= 1 and 0 < epsilon < 1) or h < 2:
        raise ValidationProblem("need h >= 2, 0 < c <= 1 and 0 < epsilon < 1")
    delta = epsilon / 8
    gamma = c ** h
    exponent = (2 / float(gamma)) * math.log2(1 / float(delta))
    log10_alpha = -h * math.log10(h) + exponent * math.log10(float(delta * gamma / 2 ** h))
    log10_beta = math.log10(factorial(h) * float(delta)) + h * math.log10(float(c)) + log10_alpha
    log10_L = -log10_beta
    # M = (h + 1)^L and K = ceil(2 M h / epsilon)
    log10_M = (10.0 ** log10_L) * math.log10(h + 1) if log10_L < 300 else math.inf
    log10_K = log10_M + math.log10(2 * h / float(epsilon))
    return CoverParameters(h, c, epsilon, delta, gamma, log10_alpha, log10_beta, log10_L, log10_M, log10_K)


def _remaining_cube(n):
    idx = np.arange(n)
    return (idx[:, None, None] != idx[None, :, None]) & (idx[None, :, None] != idx[None, None, :]) \
        & (idx[:, None, None] != idx[None, None, :])


def _coverage(cube, blocks):
    return int(cube[np.ix_(*blocks)].sum())


def _remove(cube, blocks):
    for perm in itertools.permutations(blocks):
        cube[np.ix_(*perm)] = False


@dataclass
class CoverTuple:
    blocks: tuple
    status: str
    source: str
    covered: int = 0


@dataclass
class CoverResult:
    n: int
    tuples: list
    covered: int
    total: int
    beta: Fraction
    parameters: CoverParameters
    candidates: int
    sources: dict = field(default_factory=dict)

    @property
    def covered_fraction(self):
        return Fraction(self.covered, self.total) if self.total else Fraction(1)

    @property
    def covered_measure(self):
        """h! |H(C)| / n^h, the density of H(C) as an ordered-tuple share."""
        return Fraction(6 * self.covered, self.n ** 3) if self.n else Fraction(0)


def recount_cover(n, tuples):
    """Triples with one vertex in each block of some cover tuple, counted independently."""
    covered = set()
    for blocks in tuples:
        for triple in itertools.product(*blocks):
            covered.add(tuple(sorted(triple)))
    return len(covered)


def _indices(points, subset):
    index = {p: i for i, p in enumerate(points)}
    return tuple(sorted(index[p] for p in subset))


def _verified(pts, q, blocks, source):
    status = homogeneity_test(q, [[pts[i] for i in b] for b in blocks])
    if not status.homogeneous:
        return None
    return CoverTuple(tuple(tuple(b) for b in blocks), status.status, source)


def _cone_candidates(pts, q, k):
    partition = radial_homogeneous_partition(pts, q, k)
    for combo in itertools.combinations(range(partition.k), 3):
        found = _verified(pts, q, [partition.blocks[i] for i in combo], 'cones')
        if found is not None:
            yield found


def _split_candidates(pts, q, rng, splits):
    n = len(pts)
    for _ in range(splits):
        order = [int(i) for i in rng.permutation(n)]
        sets = [[pts[i] for i in part] for part in np.array_split(order, 3)]
        try:
            result = extract_homogeneous_subsets(q, sets)
        except PreconditionError:
            continue
        found = _verified(pts, q, [_indices(pts.points, s) for s in result.subsets], 'random-split')
        if found is not None:
            yield found


def _superregular_candidate(pts, q, cube, gamma, delta, seed):
    n = len(pts) - len(pts) % 3
    edges = tuple(t for t in itertools.combinations(range(n), 3) if cube[t])
    if not edges:
        return None
    try:
        found = find_superregular(Hypergraph(n, 3, edges), gamma, delta, seed=seed)
    except (PreconditionError, BudgetExhausted) as exc:
        logger.info(f"No superregular tuple in the remaining hypergraph: {exc}")
        return None
    sets = [[pts[i] for i in block] for block in found.blocks]
    try:
        result = extract_homogeneous_subsets(q, sets)
    except PreconditionError:
        return None
    return _verified(pts, q, [_indices(pts.points, s) for s in result.subsets], 'superregular')


def homogeneous_cover(points, q, epsilon, c=Fraction(1, 64), beta=None, k_cones=None, splits=8, seed=None):
    """Greedy cover of the triples by homogeneous tuples (with respect to H_q).

    Each round takes the candidate tuple covering the most still-uncovered triples and stops
    once no candidate covers at least ``beta`` of them (as an ordered-tuple share). Candidates
    come from triples of radial cones around q, from extraction inside random splits and,
    when those fall short, from extraction inside a superregular tuple of what is left.
    """
    pts = points if isinstance(points, PointSet) else PointSet(tuple(points))
    q = q if isinstance(q, Point) else Point(tuple(q))
    n = len(pts)
    if n > MAX_COVER_POINTS:
        raise BudgetExhausted(f"covers are computed for at most {MAX_COVER_POINTS} points, got {n}", attempts=0)
    if n < 3:
        raise ValidationProblem("at least three points are needed")
    epsilon = Fraction(epsilon)
    parameters = cover_parameters(3, c, epsilon)
    beta = Fraction(beta) if beta is not None else parameters.delta
    logger.info(f"Cover with beta={beta}; the covering argument's beta is 10^{parameters.log10_beta:.3g}")
    seed = resolve(seed, 'DEFAULT_SEED')
    rng = np.random.default_rng(seed)
    k = k_cones if k_cones is not None else min(math.ceil(12 / epsilon) + 1, n // 2)

    candidates = []
    if k >= 3:
        candidates.extend(_cone_candidates(pts, q, k))
    candidates.extend(_split_candidates(pts, q, rng, splits))
    cube = _remaining_cube(n)
    threshold = beta * n ** 3 / 6
    chosen = []
    sources = {}
    max_steps = math.floor(1 / beta)
    while True:
        scored = [(_coverage(cube, t.blocks), i) for i, t in enumerate(candidates)]
        best = max(scored, default=(0, -1), key=lambda s: (s[0], -s[1]))
        if best[0] < threshold:
            extra = _superregular_candidate(pts, q, cube, parameters.gamma, parameters.delta, seed + len(chosen))
            if extra is not None and _coverage(cube, extra.blocks) >= threshold:
                candidates.append(extra)
                best = (_coverage(cube, extra.blocks), len(candidates) - 1)
            else:
                break
        picked = candidates[best[1]]
        picked = CoverTuple(picked.blocks, picked.status, picked.source, best[0])
        _remove(cube, picked.blocks)
        chosen.append(picked)
        sources[picked.source] = sources.get(picked.source, 0) + 1
        if len(chosen) > max_steps:
            raise InvariantViolation(f"cover has {len(chosen)} tuples, more than 1/beta = {max_steps}")
    covered = comb(n, 3) - int(cube.sum()) // 6
    logger.info(f"Cover of {n} points: {len(chosen)} tuples covering {covered} of {comb(n, 3)} triples")
    return CoverResult(n, chosen, covered, comb(n, 3), beta, parameters, len(candidates), sources)


def _pattern_classes(n, cover):
    signature = {}
    for v in range(n):
        key = tuple(next((i + 1 for i, b in enumerate(t.blocks) if v in b), 0) for t in cover.tuples)
        signature.setdefault(key, []).append(v)
    return [signature[key] for key in sorted(signature)]


@dataclass
class HomogeneousPartitionResult:
    partition: LabeledPartition
    audit: object
    cover: CoverResult
    classes: int


def homogeneous_partition(points, q, k, epsilon, **cover_options):
    """k blocks of sizes n//k or n//k + 1 refined from a homogeneous cover.

    Vertices are grouped by their membership pattern in the cover tuples, each group is cut into
    pieces of n//k vertices and the leftovers are pooled to complete the k blocks.
    """
    pts = points if isinstance(points, PointSet) else PointSet(tuple(points))
    n = len(pts)
    if not 1 <= k <= n:
        raise ValidationProblem(f"cannot cut {n} points into {k} non-empty blocks")
    cover = homogeneous_cover(pts, q, epsilon, **cover_options)
    if k < 10 ** min(cover.parameters.log10_K, 300):
        logger.info(f"k={k} is below the partition theorem's K (10^{cover.parameters.log10_K:.3g}); audit decides")
    classes = _pattern_classes(n, cover)
    sizes = equipartition_sizes(n, k)
    size = n // k
    pieces, pool = [], []
    for members in classes:
        full = len(members) // size if size else 0
        for j in range(full):
            if len(pieces) < k:
                pieces.append(list(members[j * size:(j + 1) * size]))
            else:
                pool.extend(members[j * size:(j + 1) * size])
        pool.extend(members[full * size:])
    blocks = []
    for i in range(k):
        block = pieces[i] if i < len(pieces) else []
        need = sizes[i] - len(block)
        block, pool = block + pool[:need], pool[need:]
        blocks.append(tuple(sorted(block)))
    if pool:
        raise InvariantViolation(f"{len(pool)} vertices left after padding")
    partition = LabeledPartition(pts, tuple(blocks), EQUIPARTITION)
    audit = homogeneity_audit(partition, q)
    return HomogeneousPartitionResult(partition, audit, cover, len(classes))
