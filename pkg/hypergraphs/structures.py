"""Hypergraph and graph data model."""
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, prod

import networkx as nx
import numpy as np

from overlap_lab.exceptions import ConstructionError, ValidationProblem


@dataclass(frozen=True)
class Hypergraph:
    """Uniform hypergraph on vertices 0..n-1.

    Hyperedges are stored as sorted tuples, deduplicated and sorted; ``provenance`` records
    the construction and its parameters and does not take part in equality.
    """

    n: int
    arity: int
    edges: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 0 or self.arity < 1:
            raise ConstructionError(f"invalid hypergraph shape n={self.n}, arity={self.arity}")
        normalized = set()
        for edge in self.edges:
            edge = tuple(sorted(int(v) for v in edge))
            if len(edge) != self.arity or len(set(edge)) != self.arity:
                raise ConstructionError(f"hyperedge {edge} is not a set of {self.arity} distinct vertices")
            if edge[0] < 0 or edge[-1] >= self.n:
                raise ConstructionError(f"hyperedge {edge} leaves the vertex range [0, {self.n})")
            normalized.add(edge)
        object.__setattr__(self, 'edges', tuple(sorted(normalized)))

    def __len__(self):
        return len(self.edges)

    @cached_property
    def incidence(self):
        table = {v: [] for v in range(self.n)}
        for edge in self.edges:
            for v in edge:
                table[v].append(edge)
        return table

    def relabeled(self, mapping):
        """Image under the vertex bijection ``mapping`` (sequence or dict)."""
        return Hypergraph(self.n, self.arity, tuple(tuple(mapping[v] for v in e) for e in self.edges),
                          dict(self.provenance, relabeled=True))

    def incidence_graph(self):
        graph = nx.Graph()
        graph.add_nodes_from((('v', v) for v in range(self.n)), kind='vertex')
        graph.add_nodes_from((('e', i) for i in range(len(self.edges))), kind='edge')
        graph.add_edges_from((('v', v), ('e', i)) for i, e in enumerate(self.edges) for v in e)
        return graph


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple
    minimum: int
    maximum: int

    @property
    def is_regular(self):
        return self.minimum == self.maximum


def degree_profile(hypergraph):
    counts = Counter(v for e in hypergraph.edges for v in e)
    degrees = tuple(counts.get(v, 0) for v in range(hypergraph.n))
    if not degrees:
        return DegreeProfile((), 0, 0)
    return DegreeProfile(degrees, min(degrees), max(degrees))


def edge_density(hypergraph):
    possible = comb(hypergraph.n, hypergraph.arity)
    return Fraction(len(hypergraph.edges), possible) if possible else Fraction(0)


def _check_blocks(blocks, arity):
    blocks = [frozenset(b) for b in blocks]
    if len(blocks) != arity:
        raise ValidationProblem(f"expected {arity} blocks, got {len(blocks)}")
    if any(not b for b in blocks):
        raise ValidationProblem("blocks must be non-empty")
    if sum(len(b) for b in blocks) != len(frozenset().union(*blocks)):
        raise ValidationProblem("blocks must be pairwise disjoint")
    return blocks


def crossing_edges(hypergraph, blocks):
    """Hyperedges meeting every block exactly once."""
    blocks = _check_blocks(blocks, hypergraph.arity)
    owner = {v: i for i, b in enumerate(blocks) for v in b}
    full = set(range(len(blocks)))
    return [e for e in hypergraph.edges
            if all(v in owner for v in e) and {owner[v] for v in e} == full]


def block_density(hypergraph, blocks):
    blocks = _check_blocks(blocks, hypergraph.arity)
    return Fraction(len(crossing_edges(hypergraph, blocks)), prod(len(b) for b in blocks))


def complete_hypergraph(n, arity):
    return Hypergraph(n, arity, tuple(itertools.combinations(range(n), arity)),
                      {'construction': 'complete', 'n': n, 'arity': arity})


def isomorphic(first, second):
    """Isomorphism of hypergraphs through their vertex-hyperedge incidence graphs."""
    if (first.n, first.arity, len(first.edges)) != (second.n, second.arity, len(second.edges)):
        return False
    return nx.is_isomorphic(first.incidence_graph(), second.incidence_graph(),
                            node_match=lambda a, b: a['kind'] == b['kind'])


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on 0..n-1 (edges stored as sorted pairs)."""

    n: int
    edges: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ConstructionError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ConstructionError(f"edge ({u}, {v}) leaves the vertex range [0, {self.n})")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'edges', tuple(sorted(normalized)))

    @classmethod
    def from_networkx(cls, graph, **provenance):
        mapping = {node: i for i, node in enumerate(sorted(graph.nodes()))}
        return cls(len(mapping), tuple((mapping[u], mapping[v]) for u, v in graph.edges()), provenance)

    @cached_property
    def adjacency(self):
        table = [set() for _ in range(self.n)]
        for u, v in self.edges:
            table[u].add(v)
            table[v].add(u)
        return tuple(frozenset(s) for s in table)

    def neighbors(self, v):
        return self.adjacency[v]

    def degree(self, v):
        return len(self.adjacency[v])

    @property
    def regular_degree(self):
        """Common degree k, or None when the graph is not regular."""
        degrees = {len(s) for s in self.adjacency}
        return degrees.pop() if len(degrees) == 1 else None

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def adjacency_matrix(self):
        matrix = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = 1
        return matrix
