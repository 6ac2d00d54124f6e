"""Hypergraph constructions: random partitions, expander neighbourhoods, walks, Cayley cliques,
uniform random regular hypergraphs."""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import networkx as nx
import numpy as np

from overlap_lab.conf import resolve
from overlap_lab.exceptions import (
    BudgetExhausted, ConstructionError, InvariantViolation, PreconditionError, ValidationProblem,
)

from . import groups
from .structures import Hypergraph, block_density, degree_profile, edge_density

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionFamily:
    """t partitions of [n] into parts of size b."""

    n: int
    b: int
    partitions: tuple
    attempts: int = field(default=1, compare=False)

    @property
    def t(self):
        return len(self.partitions)

    def labels(self):
        """(t, n) array: labels[i, v] is the part of v in partition i."""
        table = np.zeros((self.t, self.n), dtype=np.int64)
        for i, partition in enumerate(self.partitions):
            for label, part in enumerate(partition):
                table[i, list(part)] = label
        return table


def parts_meet_in_at_most_two(family):
    """Two parts from different partitions share at most two elements."""
    labels = family.labels()
    parts = family.n // family.b
    for i, j in itertools.combinations(range(family.t), 2):
        overlap = np.zeros((parts, parts), dtype=np.int64)
        np.add.at(overlap, (labels[i], labels[j]), 1)
        if overlap.max() > 2:
            return False
    return True


def random_partition_family(n, b, t, seed, retry_limit=None):
    """t uniform random partitions of [n] into n/b parts, resampled until parts of different
    partitions meet in at most two elements."""
    if b < 1 or t < 1 or n % b:
        raise ValidationProblem(f"need b | n with b, t >= 1 (n={n}, b={b}, t={t})")
    limit = resolve(retry_limit, 'RETRY_LIMIT')
    rng = np.random.default_rng(seed)
    for attempt in range(1, limit + 1):
        partitions = []
        for _ in range(t):
            order = rng.permutation(n)
            partitions.append(tuple(tuple(sorted(int(v) for v in order[s:s + b])) for s in range(0, n, b)))
        family = PartitionFamily(n, b, tuple(partitions), attempts=attempt)
        if t == 1 or parts_meet_in_at_most_two(family):
            logger.debug(f"Partition family n={n} b={b} t={t} accepted after {attempt} attempts")
            return family
    raise BudgetExhausted(f"no partition family with pairwise part intersections <= 2 after {limit} attempts",
                          attempts=limit)


def random_partition_parameters(delta):
    """The proof's parameters b, beta, r, t and the degree k = t * C(b-1, 2), with log10 values."""
    if not 0 < delta < 1:
        raise ValidationProblem("delta must lie in (0, 1)")
    b = math.ceil(delta ** -3)
    log_beta = math.log(2) - 2 * delta ** 2 * b
    log_r = math.log(4) + math.log(b) - 2 * log_beta
    log_t = log_r - math.log(delta)
    log_k = log_t + math.log(comb(b - 1, 2)) if b >= 3 else float('-inf')
    ln10 = math.log(10)
    return {
        'delta': delta,
        'b': b,
        'beta': math.exp(log_beta),
        'log10_r': log_r / ln10,
        'log10_t': log_t / ln10,
        'log10_k': log_k / ln10,
    }


def concentration_counts(family, subset, delta):
    """Per partition: the number of parts holding at least (|S|/n + delta) b elements of S."""
    subset = set(subset)
    threshold = (Fraction(len(subset), family.n) + Fraction(str(delta))) * family.b
    return [sum(1 for part in partition if len(subset.intersection(part)) >= threshold)
            for partition in family.partitions]


def concentration_audit(family, subset, delta):
    """Number of partitions in which at least beta n / b parts are overloaded with S."""
    beta = 2 * math.exp(-2 * float(delta) ** 2 * family.b)
    limit = beta * family.n / family.b
    return sum(1 for count in concentration_counts(family, subset, delta) if count >= limit)


def partition_hypergraph(family, arity=3):
    """All arity-subsets of every part; degree t * C(b-1, arity-1)."""
    edges = {tuple(sorted(c)) for partition in family.partitions for part in partition
             for c in itertools.combinations(part, arity)}
    hypergraph = Hypergraph(family.n, arity, tuple(edges),
                            {'construction': 'partition', 'n': family.n, 'b': family.b, 't': family.t})
    expected = family.t * comb(family.b - 1, arity - 1)
    if arity >= 3 and degree_profile(hypergraph).degrees != (expected,) * family.n:
        raise InvariantViolation(f"partition hypergraph is not {expected}-regular")
    return hypergraph


def neighborhood_triple_hypergraph(graph):
    """Triples inside a common neighbourhood N(r) of a k-regular quadrilateral-free graph."""
    from spectral.analysis import is_quadrilateral_free

    k = graph.regular_degree
    if k is None:
        raise ConstructionError("the neighbourhood construction needs a regular graph")
    if not is_quadrilateral_free(graph):
        raise ConstructionError("the graph contains a 4-cycle; neighbourhood triples would repeat")
    edges = [c for r in range(graph.n) for c in itertools.combinations(sorted(graph.neighbors(r)), 3)]
    hypergraph = Hypergraph(graph.n, 3, tuple(edges),
                            {'construction': 'neighborhood', 'n': graph.n, 'k': k,
                             'graph': graph.provenance})
    if len(hypergraph.edges) != comb(k, 3) * graph.n or len(edges) != len(hypergraph.edges):
        raise InvariantViolation(f"expected C({k},3)*{graph.n} distinct triples, got {len(hypergraph.edges)}")
    profile = degree_profile(hypergraph)
    if profile.degrees != (k * comb(k - 1, 2),) * graph.n:
        raise InvariantViolation(f"neighbourhood hypergraph is not {k * comb(k - 1, 2)}-regular")
    return hypergraph


def walk_hypergraph(graph, d):
    """Vertex sets of non-returning walks with d steps through d+1 distinct vertices."""
    k = graph.regular_degree
    if k is not None and k < d:
        raise PreconditionError(f"walks of length {d} need degree at least {d}, got {k}")
    adjacency = graph.adjacency
    found = set()

    def extend(walk):
        if len(walk) == d + 1:
            found.add(tuple(sorted(walk)))
            return
        for nxt in adjacency[walk[-1]]:
            if nxt not in walk:
                extend(walk + [nxt])

    for start in range(graph.n):
        extend([start])
    hypergraph = Hypergraph(graph.n, d + 1, tuple(found),
                            {'construction': 'walk', 'n': graph.n, 'd': d, 'graph': graph.provenance})
    max_degree = max((len(a) for a in adjacency), default=0)
    if len(hypergraph.edges) > max_degree ** d * graph.n:
        raise InvariantViolation("walk hypergraph exceeds k^d n hyperedges")
    return hypergraph


def cayley_graph(elements, connection_set):
    """networkx graph on element ids with g ~ h iff g h^-1 lies in the connection set."""
    index = {g: i for i, g in enumerate(elements)}
    graph = nx.Graph()
    graph.add_nodes_from(range(len(elements)))
    for g in elements:
        for s in connection_set:
            h = groups.compose(groups.inverse(s), g)
            graph.add_edge(index[g], index[h])
    return graph


def cayley_clique_hypergraph(generators, connection_set, r):
    """r-cliques of the Cayley graph of the group generated by ``generators``."""
    if r < 2:
        raise ValidationProblem("clique size r must be at least 2")
    elements = groups.closure(generators)
    members = set(elements)
    connection_set = sorted({tuple(s) for s in connection_set})
    identity = groups.identity(len(elements[0]))
    if identity in connection_set:
        raise ValidationProblem("the connection set must not contain the identity")
    if not groups.is_symmetric(connection_set):
        raise ValidationProblem("the connection set must be closed under inverses")
    if any(s not in members for s in connection_set):
        raise ValidationProblem("the connection set must consist of group elements")
    graph = cayley_graph(elements, connection_set)
    edges = []
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) > r:
            break
        if len(clique) == r:
            edges.append(tuple(clique))
    return Hypergraph(len(elements), r, tuple(edges),
                      {'construction': 'cayley', 'order': len(elements), 'r': r,
                       'connection_set': [list(s) for s in connection_set]})


def _configuration_sample(n, arity, r, rng):
    stubs = rng.permutation(np.repeat(np.arange(n), r))
    return [tuple(sorted(int(v) for v in stubs[s:s + arity])) for s in range(0, len(stubs), arity)]


def _is_simple(groups_):
    return all(len(set(g)) == len(g) for g in groups_) and len(set(groups_)) == len(groups_)


def _repair(groups_, rng, budget):
    """Swap single vertices between hyperedges until the configuration is simple."""
    groups_ = [list(g) for g in groups_]

    def bad():
        seen, out = set(), []
        for i, g in enumerate(groups_):
            key = tuple(sorted(g))
            if len(set(g)) < len(g) or key in seen:
                out.append(i)
            seen.add(key)
        return out

    for _ in range(budget):
        broken = bad()
        if not broken:
            return [tuple(sorted(g)) for g in groups_]
        i = broken[int(rng.integers(len(broken)))]
        j = int(rng.integers(len(groups_)))
        a, b = int(rng.integers(len(groups_[i]))), int(rng.integers(len(groups_[j])))
        groups_[i][a], groups_[j][b] = groups_[j][b], groups_[i][a]
        if len(bad()) > len(broken):
            groups_[i][a], groups_[j][b] = groups_[j][b], groups_[i][a]
    return None


def random_regular_hypergraph(n, arity, r, seed, retry_limit=None):
    """Simple r-regular arity-uniform hypergraph from the configuration model.

    Rejection sampling first (uniform over simple outcomes); after ``retry_limit`` rejections
    the last sample is repaired by vertex swaps, which is only near-uniform and is recorded
    in the provenance.
    """
    if arity < 1 or r < 0 or n < arity or (r * n) % arity:
        raise ValidationProblem(f"no {r}-regular {arity}-uniform hypergraph on {n} vertices")
    if r > comb(n - 1, arity - 1):
        raise ValidationProblem(f"degree {r} exceeds C({n - 1}, {arity - 1})")
    limit = resolve(retry_limit, 'RETRY_LIMIT')
    rng = np.random.default_rng(seed)
    provenance = {'construction': 'random-regular', 'n': n, 'arity': arity, 'r': r, 'seed': int(seed)}
    sample = None
    for attempt in range(1, limit + 1):
        sample = _configuration_sample(n, arity, r, rng)
        if _is_simple(sample):
            return Hypergraph(n, arity, tuple(sample), dict(provenance, attempts=attempt, fallback=False))
    repaired = _repair(sample, rng, limit * max(n, 1))
    if repaired is None:
        raise BudgetExhausted(f"configuration model did not produce a simple hypergraph in {limit} attempts",
                              attempts=limit)
    logger.warning(f"Random regular hypergraph n={n} r={r}: using swap-repaired fallback sample")
    return Hypergraph(n, arity, tuple(repaired), dict(provenance, attempts=limit, fallback=True))


def density_ratio_audit(hypergraph, epsilon, k, trials, seed):
    """Fraction of random disjoint block tuples (|V_i| >= n/k) whose density ratio leaves [1 - eps/4, 1 + eps/4]."""
    rng = np.random.default_rng(seed)
    base = edge_density(hypergraph)
    h = hypergraph.arity
    size = max(1, math.ceil(hypergraph.n / k))
    if size * h > hypergraph.n:
        raise ValidationProblem(f"{h} disjoint blocks of size {size} do not fit in {hypergraph.n} vertices")
    violations = 0
    ratios = []
    for _ in range(trials):
        order = rng.permutation(hypergraph.n)
        blocks = [set(int(v) for v in order[i * size:(i + 1) * size]) for i in range(h)]
        density = block_density(hypergraph, blocks)
        ratio = density / base if base else 0
        ratios.append(float(ratio))
        if abs(ratio - 1) > epsilon / 4:
            violations += 1
    return {'trials': trials, 'block_size': size, 'violations': violations,
            'violation_rate': violations / trials if trials else 0.0, 'ratios': ratios}


def first_vertices_hypergraph(n, d):
    """All (d+1)-sets containing the vertices 0..d-1."""
    if n <= d:
        raise ValidationProblem(f"need more than {d} vertices")
    core = tuple(range(d))
    return Hypergraph(n, d + 1, tuple(core + (v,) for v in range(d, n)),
                      {'construction': 'first-vertices', 'n': n, 'd': d})
