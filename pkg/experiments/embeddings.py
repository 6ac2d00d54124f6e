"""Random-bijection embeddings and annealing searches for embeddings with low overlap."""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from overlap_lab.conf import lab_setting
from overlap_lab.exceptions import DimensionMismatch, InvariantViolation, ValidationProblem

from geometry.overlap import deep_point_complete, overlap_value
from geometry.points import Embedding, Point, PointSet, random_point_set, snap
from hypergraphs.structures import degree_profile

from .config import ExperimentConfig

logger = logging.getLogger(__name__)

AZUMA_LAMBDAS = (1, 2, 4, 8, 16, 32)


def azuma_deviation_bound(k, max_degree, n, lam):
    """Bound on P(|hits - |E(H)||E(F)|/C(n,k)| > lam*sqrt(n)) for a random bijection.

    Equals 2 exp(-lam^2 / (2 (2k+1)^2 max_degree^2)); ``n`` only fixes the deviation scale.
    """
    if k < 1 or max_degree < 1 or n < 1 or lam < 0:
        raise ValidationProblem("the Azuma bound needs k, max degree and n positive and lam >= 0")
    return 2 * math.exp(-lam ** 2 / (2 * (2 * k + 1) ** 2 * max_degree ** 2))


def _check_sizes(hypergraph, points):
    if len(points) != hypergraph.n:
        raise DimensionMismatch(f"{len(points)} points for a hypergraph on {hypergraph.n} vertices")


def random_bijection_overlap(hypergraph, points, seed):
    """Overlap of H under a uniformly random bijection onto ``points``."""
    _check_sizes(hypergraph, points)
    rng = np.random.default_rng(seed)
    permutation = [int(i) for i in rng.permutation(hypergraph.n)]
    return overlap_value(hypergraph, Embedding.from_bijection(points, permutation))


def bijection_counts(hypergraph, points, seeds):
    return [random_bijection_overlap(hypergraph, points, s).covered for s in seeds]


@dataclass
class BijectionStudy:
    n: int
    edges: int
    trials: int
    counts: list
    deep_fraction: Fraction
    deep_count: int
    max_degree: int
    azuma: list = field(default_factory=list)

    @property
    def fractions(self):
        return [Fraction(c, self.edges) for c in self.counts]

    @property
    def mean(self):
        return Fraction(sum(self.counts), self.edges * len(self.counts))

    @property
    def maximum(self):
        return Fraction(max(self.counts), self.edges)

    def quantile(self, q):
        """Nearest-rank quantile of the overlap fractions."""
        ordered = sorted(self.counts)
        rank = max(1, math.ceil(q * len(ordered)))
        return Fraction(ordered[rank - 1], self.edges)

    @property
    def p95(self):
        return self.quantile(0.95)

    @property
    def expected_hits(self):
        """|E(H)| |E(F)| / C(n, k) with F the triples around the deep point of the point set."""
        return Fraction(self.edges * self.deep_count, comb(self.n, 3))


def bijection_study(hypergraph, points, seed, trials, threads=1, use_async=False):
    """Overlap distribution over ``trials`` random bijections, next to the point set's deep point.

    Trial seeds are spawned from ``seed``, so the batch is reproducible whatever the chunking.
    """
    _check_sizes(hypergraph, points)
    if hypergraph.arity != 3:
        raise DimensionMismatch("bijection studies compare triangles with the planar deep point")
    cfg = ExperimentConfig(seed=seed, trials=trials, threads=threads)
    seeds = cfg.spawn_seeds(trials)
    if use_async:
        from .tasks import run_bijection_chunks
        counts = run_bijection_chunks(hypergraph, points, seeds, threads)
    else:
        counts = bijection_counts(hypergraph, points, seeds)
    deep = deep_point_complete(points)
    delta = degree_profile(hypergraph).maximum
    azuma = [(lam, azuma_deviation_bound(3, delta, hypergraph.n, lam)) for lam in AZUMA_LAMBDAS]
    study = BijectionStudy(hypergraph.n, len(hypergraph.edges), trials, counts, deep.fraction, deep.covered,
                           delta, azuma)
    logger.info(f"Bijection study n={study.n}: mean {float(study.mean):.4f}, p95 {float(study.p95):.4f}, "
                f"deep point {float(study.deep_fraction):.4f}")
    return study


@dataclass
class ChainResult:
    chain: int
    seed: int
    points: PointSet
    covered: int
    total: int
    accepted: int
    best_history: list = field(default_factory=list)

    @property
    def fraction(self):
        return Fraction(self.covered, self.total)


def _proposal(points, vertex, rng, scale, denominator):
    x, y = (float(c) for c in points[vertex])
    nx_, ny_ = np.clip(np.array([x, y]) + rng.normal(scale=scale, size=2), 0.0, 1.0)
    moved = Point((snap(float(nx_), denominator), snap(float(ny_), denominator)))
    return PointSet(points.points[:vertex] + (moved,) + points.points[vertex + 1:])


def anneal_chain(hypergraph, seed, cfg, chain=0, start=None):
    """One annealing chain: exact overlap after every snapped move, best state kept.

    The random stream does not depend on ``cfg.steps``, so a longer run only extends the
    shorter one and never returns a larger minimum.
    """
    if hypergraph.arity != 3:
        raise DimensionMismatch("the adversarial search runs in the plane")
    denominator = lab_setting('SNAP_DENOMINATOR')
    rng = np.random.default_rng(seed)
    current = start if start is not None else random_point_set(hypergraph.n, rng, denominator=denominator)
    score = overlap_value(hypergraph, current).covered
    total = len(hypergraph.edges)
    best, best_score = current, score
    history = [best_score]
    accepted = 0
    for step in range(cfg.steps):
        vertex = int(rng.integers(hypergraph.n))
        candidate = _proposal(current, vertex, rng, cfg.step_scale, denominator)
        if len(set(candidate.points)) != len(candidate) or not candidate.general_position:
            history.append(best_score)
            continue
        value = overlap_value(hypergraph, candidate).covered
        rise = (value - score) / total
        if rise <= 0 or rng.random() < math.exp(-rise / cfg.temperature(step)):
            current, score = candidate, value
            accepted += 1
            if score < best_score:
                best, best_score = current, score
        history.append(best_score)
    return ChainResult(chain, seed, best, best_score, total, accepted, history)


@dataclass
class AdversarialResult:
    embedding: PointSet
    covered: int
    total: int
    witness: Point
    chain: int
    chains: list

    @property
    def fraction(self):
        return Fraction(self.covered, self.total)


def reduce_chains(hypergraph, chains):
    """Minimum over chains, lowest chain index first on ties; re-scored exactly."""
    best = min(chains, key=lambda c: (c.covered, c.chain))
    report = overlap_value(hypergraph, best.points)
    if report.covered != best.covered:
        raise InvariantViolation(f"chain {best.chain} does not reproduce its overlap on re-scoring")
    return AdversarialResult(best.points, report.covered, report.total, report.witness, best.chain,
                             [(c.chain, c.covered) for c in chains])


def adversarial_embedding(hypergraph, cfg, use_async=False):
    """Embedding of H with the smallest exact overlap found by ``cfg.chains`` annealing chains.

    The result is an upper bound on the overlap number of H.
    """
    if not hypergraph.edges:
        raise ValidationProblem("the hypergraph has no hyperedges")
    seeds = cfg.spawn_seeds(cfg.chains, salt=1)
    if use_async:
        from .tasks import run_anneal_chains
        chains = run_anneal_chains(hypergraph, cfg, seeds)
    else:
        chains = [anneal_chain(hypergraph, s, cfg, chain=i) for i, s in enumerate(seeds)]
    result = reduce_chains(hypergraph, chains)
    logger.info(f"Annealing over {cfg.chains} chains x {cfg.steps} steps: best overlap "
                f"{result.covered}/{result.total} from chain {result.chain}")
    return result
