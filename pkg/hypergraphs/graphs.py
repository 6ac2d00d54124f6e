"""Graph families used by the expander constructions."""
import logging

import networkx as nx
import numpy as np

from overlap_lab.conf import resolve
from overlap_lab.exceptions import BudgetExhausted, ConstructionError, ValidationProblem

from .structures import Graph

logger = logging.getLogger(__name__)


def petersen_graph():
    return Graph.from_networkx(nx.petersen_graph(), construction='petersen')


def cycle_graph(n):
    return Graph.from_networkx(nx.cycle_graph(n), construction='cycle', n=n)


def path_graph(n):
    return Graph.from_networkx(nx.path_graph(n), construction='path', n=n)


def star_graph(leaves):
    return Graph.from_networkx(nx.star_graph(leaves), construction='star', leaves=leaves)


def complete_graph(n):
    return Graph.from_networkx(nx.complete_graph(n), construction='complete', n=n)


def random_regular_graph(n, k, seed):
    if k >= n or (n * k) % 2:
        raise ConstructionError(f"no simple {k}-regular graph on {n} vertices")
    graph = nx.random_regular_graph(k, n, seed=int(seed) % (2 ** 32))
    return Graph.from_networkx(graph, construction='random-regular', n=n, k=k, seed=int(seed))


def _is_prime(q):
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


def projective_plane_incidence(q):
    """Point-line incidence graph of PG(2, q): (q+1)-regular, bipartite, girth 6."""
    if not _is_prime(q):
        raise ValidationProblem(f"q must be prime, got {q}")
    reps = [(1, a, b) for a in range(q) for b in range(q)]
    reps += [(0, 1, a) for a in range(q)]
    reps.append((0, 0, 1))
    size = len(reps)
    edges = [(i, size + j) for i, p in enumerate(reps) for j, line in enumerate(reps)
             if sum(x * y for x, y in zip(p, line)) % q == 0]
    return Graph(2 * size, tuple(edges), {'construction': 'projective-plane', 'q': q})


def _short_cycles_through(adjacency, a, b):
    """Triangles plus 4-cycles that use the edge ab."""
    left, right = adjacency[a] - {b}, adjacency[b] - {a}
    triangles = len(left & right)
    squares = sum(len((adjacency[c] & right) - {c}) for c in left)
    return triangles + squares


def random_girth5_graph(n, k, seed, swap_budget=None):
    """Seeded random k-regular graph repaired by degree-preserving edge swaps to girth >= 5."""
    budget = resolve(swap_budget, 'RETRY_LIMIT') * n
    rng = np.random.default_rng(seed)
    start = random_regular_graph(n, k, int(rng.integers(0, 2 ** 32)))
    adjacency = [set(s) for s in start.adjacency]
    edges = list(start.edges)

    def bad_edges():
        return [e for e in edges if _short_cycles_through(adjacency, *e)]

    pending = bad_edges()
    swaps = 0
    for attempt in range(budget):
        if not pending:
            break
        if attempt % 50 == 0:
            pending = bad_edges()
            if not pending:
                break
        a, b = pending[int(rng.integers(len(pending)))]
        if b not in adjacency[a]:
            pending.remove((a, b))
            continue
        c, d = edges[int(rng.integers(len(edges)))]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4 or c in adjacency[a] or d in adjacency[b]:
            continue
        before = _short_cycles_through(adjacency, a, b) + _short_cycles_through(adjacency, min(c, d), max(c, d))
        for u, v in ((a, b), (c, d)):
            adjacency[u].discard(v)
            adjacency[v].discard(u)
        for u, v in ((a, c), (b, d)):
            adjacency[u].add(v)
            adjacency[v].add(u)
        after = _short_cycles_through(adjacency, a, c) + _short_cycles_through(adjacency, b, d)
        if after < before:
            edges.remove((min(a, b), max(a, b)))
            edges.remove((min(c, d), max(c, d)))
            edges.extend([(min(a, c), max(a, c)), (min(b, d), max(b, d))])
            swaps += 1
        else:
            for u, v in ((a, c), (b, d)):
                adjacency[u].discard(v)
                adjacency[v].discard(u)
            for u, v in ((a, b), (c, d)):
                adjacency[u].add(v)
                adjacency[v].add(u)
    if bad_edges():
        raise BudgetExhausted(f"girth repair of a {k}-regular graph on {n} vertices did not finish",
                              attempts=budget)
    logger.info(f"Girth-5 repair finished after {swaps} swaps (n={n}, k={k})")
    return Graph(n, tuple(edges), {'construction': 'random-girth5', 'n': n, 'k': k, 'seed': int(seed)})
