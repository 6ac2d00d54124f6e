"""Overlap of neighbourhood-triple hypergraphs of expanders, with the counting bounds behind it."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

import numpy as np

from overlap_lab.conf import lab_setting
from overlap_lab.exceptions import InvariantViolation, PreconditionError, ValidationProblem

from geometry.arrangement import containment_matrix
from geometry.overlap import overlap_value
from geometry.points import random_point_set
from hypergraphs.constructions import neighborhood_triple_hypergraph
from partitions.sectors import ceder_partition
from spectral.analysis import adjacency_spectrum

from .embeddings import adversarial_embedding

logger = logging.getLogger(__name__)


def core_vertices(graph, sectors, delta):
    """Vertices with at least (1 - delta) k / 6 neighbours in every sector."""
    k = graph.regular_degree
    owner = {v: j for j, sector in enumerate(sectors) for v in sector}
    threshold = (1 - Fraction(delta)) * k / 6
    core = []
    for i in range(graph.n):
        hits = [0] * len(sectors)
        for v in graph.neighbors(i):
            hits[owner[v]] += 1
        if all(h >= threshold for h in hits):
            core.append(i)
    return core


def core_size_bound(n, k, lam, delta):
    """n (1 - 36 lam^2 / (delta^2 k^2)); non-positive values are vacuous."""
    return n * (1 - 36 * lam ** 2 / (float(delta) ** 2 * k ** 2))


def apex_count_bound(k, delta, core):
    """Triangles around the apex guaranteed by the six-sector argument for a core of this size."""
    delta = float(delta)
    return 8 * ((1 - delta) * k / 6) ** 6 / ((1 + 5 * delta) * k / 6) ** 3 * core


@dataclass
class EmbeddingAudit:
    source: str
    covered: int
    total: int
    method: str
    apex_covered: int
    sector_counts: tuple
    core: list
    core_bound: float
    apex_bound: float

    @property
    def fraction(self):
        return Fraction(self.covered, self.total)

    @property
    def core_bound_vacuous(self):
        return self.core_bound <= 0

    @property
    def apex_bound_holds(self):
        return self.apex_covered >= self.apex_bound


@dataclass
class ExpanderReport:
    n: int
    k: int
    lam: float
    delta: Fraction
    edges: int
    embeddings: list = field(default_factory=list)

    @property
    def minimum(self):
        return min(a.fraction for a in self.embeddings)

    @property
    def deficits(self):
        """Losses in the apex count, reported apart since their constants are unspecified."""
        delta = float(self.delta)
        return {'delta': delta, 'spectral': self.lam ** 2 / (delta ** 2 * self.k ** 2), 'degree': 1 / self.k}


def _audit(graph, hypergraph, points, source, lam, delta, exact):
    partition = ceder_partition(points)
    apex_covered = int(containment_matrix(points, hypergraph.edges, [partition.apex]).sum())
    if exact:
        report = overlap_value(hypergraph, points)
        covered, method = report.covered, report.method
    else:
        covered, method = apex_covered, 'sector-apex-lower-bound'
    core = core_vertices(graph, partition.sectors, delta)
    k = graph.regular_degree
    audit = EmbeddingAudit(source, covered, len(hypergraph.edges), method, apex_covered, partition.counts,
                           core, core_size_bound(graph.n, k, lam, delta), apex_count_bound(k, delta, len(core)))
    if not audit.apex_bound_holds:
        logger.warning(f"Embedding {source}: {apex_covered} triangles at the apex, below the "
                       f"six-sector count {audit.apex_bound:.2f} for |A|={len(core)}")
    return audit


def expander_overlap_pipeline(graph, cfg, delta=Fraction(1, 2)):
    """Neighbourhood triples of a regular quadrilateral-free graph under random and annealed embeddings.

    Every embedding gets its sector partition, the core set A and the spectral bound on |A|.
    Up to ``cfg.exact_limit`` vertices the overlap is exact; above it the coverage at the
    sector apex is reported as a lower bound for that embedding.
    """
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValidationProblem("delta must lie in (0, 1)")
    hypergraph = neighborhood_triple_hypergraph(graph)
    spectrum = adjacency_spectrum(graph)
    exact = graph.n <= cfg.exact_limit
    report = ExpanderReport(graph.n, spectrum.k, spectrum.lam, delta, len(hypergraph.edges))
    denominator = lab_setting('SNAP_DENOMINATOR')
    for trial, seed in enumerate(cfg.spawn_seeds(cfg.trials, salt=2)):
        points = random_point_set(graph.n, np.random.default_rng(seed), denominator=denominator)
        report.embeddings.append(_audit(graph, hypergraph, points, f'random-{trial}', spectrum.lam, delta, exact))
    if exact and cfg.steps > 0:
        found = adversarial_embedding(hypergraph, cfg)
        report.embeddings.append(_audit(graph, hypergraph, found.embedding, 'annealed', spectrum.lam, delta, exact))
    vacuous = report.embeddings[0].core_bound_vacuous
    logger.info(f"Expander pipeline n={graph.n} k={spectrum.k} lam={spectrum.lam:.4f}: minimum overlap "
                f"{float(report.minimum):.4f} over {len(report.embeddings)} embeddings"
                f"{' (core bound vacuous)' if vacuous else ''}")
    return report


@dataclass
class WalkAudit:
    n: int
    k: int
    lam: float
    c_prime: Fraction
    pruned: list
    bounds: list
    completing: int

    @property
    def sizes(self):
        return [len(q) for q in self.pruned]


def _completing_starts(adjacency, blocks):
    @cache
    def reaches(v, level):
        if level == len(blocks):
            return True
        return any(w in blocks[level] and reaches(w, level + 1) for w in adjacency[v])

    return sum(1 for j in blocks[0] if reaches(j, 1))


def walk_recursion_audit(graph, blocks, c_prime=None):
    """Prune Q_1..Q_{d+1} backwards to the vertices with a neighbour in the next pruned block.

    Each step must satisfy |Q~_{i-1}| >= c'n - lam^2 n^2 / (k^2 |Q~_i|). The vertices of Q~_1
    are exactly the starts of walks visiting Q_1, ..., Q_{d+1} in order.
    """
    k = graph.regular_degree
    if k is None:
        raise PreconditionError("the walk recursion needs a regular graph")
    blocks = [frozenset(b) for b in blocks]
    if len(blocks) < 2:
        raise ValidationProblem("at least two blocks are needed")
    if any(not b for b in blocks) or sum(len(b) for b in blocks) != len(frozenset().union(*blocks)):
        raise ValidationProblem("blocks must be non-empty and pairwise disjoint")
    n = graph.n
    smallest = Fraction(min(len(b) for b in blocks), n)
    c_prime = smallest if c_prime is None else Fraction(c_prime)
    if c_prime > smallest:
        raise PreconditionError(f"c'={c_prime} exceeds the smallest block fraction {smallest}")
    spectrum = adjacency_spectrum(graph)
    lam = spectrum.lam + spectrum.error_bound
    adjacency = graph.adjacency

    pruned = [None] * len(blocks)
    pruned[-1] = blocks[-1]
    bounds = []
    for i in range(len(blocks) - 1, 0, -1):
        nxt = pruned[i]
        pruned[i - 1] = frozenset(j for j in blocks[i - 1] if any(w in nxt for w in adjacency[j]))
        bound = float(c_prime) * n - (lam ** 2 * n ** 2 / (k ** 2 * len(nxt)) if nxt else float('inf'))
        bounds.append(bound)
        if len(pruned[i - 1]) < bound - 1e-9 * n:
            raise InvariantViolation(f"|Q~_{i}| = {len(pruned[i - 1])} is below the mixing bound {bound:.4f}")
    completing = _completing_starts(adjacency, blocks)
    if completing != len(pruned[0]):
        raise InvariantViolation(f"{completing} completing walks but |Q~_1| = {len(pruned[0])}")
    return WalkAudit(n, k, spectrum.lam, c_prime, [sorted(q) for q in pruned], bounds[::-1], completing)
