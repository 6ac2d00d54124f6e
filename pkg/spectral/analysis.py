"""Adjacency spectra, the expander mixing lemma, girth and quadrilateral checks."""
import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse

from overlap_lab.conf import resolve
from overlap_lab.exceptions import PreconditionError, ValidationProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalues in descending order with a certified absolute error bound.

    ``lam`` is the largest absolute value among all eigenvalues but the first.
    """

    n: int
    k: int
    regular: bool
    eigenvalues: tuple
    error_bound: float

    @property
    def lam(self):
        if self.n < 2:
            return 0.0
        return max(abs(v) for v in self.eigenvalues[1:])

    @property
    def ramanujan_threshold(self):
        return 2 * math.sqrt(self.k - 1) if self.k >= 1 else 0.0


def adjacency_spectrum(graph):
    """Full symmetric eigendecomposition.

    The error bound is the largest eigenpair residual plus a rounding allowance; for a
    symmetric matrix every computed eigenvalue is within its residual of a true one.
    """
    if graph.n == 0:
        raise ValidationProblem("the spectrum of the empty graph is undefined")
    matrix = graph.adjacency_matrix().astype(float)
    values, vectors = np.linalg.eigh(matrix)
    residual = np.linalg.norm(matrix @ vectors - vectors * values[None, :], axis=0)
    norm = float(np.abs(matrix).sum(axis=1).max()) if graph.n else 0.0
    error = float(residual.max()) + 4 * graph.n * np.finfo(float).eps * max(norm, 1.0)
    k = graph.regular_degree
    if k is None:
        logger.warning(f"Spectrum of an irregular graph on {graph.n} vertices; k set to the maximum degree")
    degree = k if k is not None else max(graph.degree(v) for v in range(graph.n))
    return SpectralReport(n=graph.n, k=degree, regular=k is not None,
                          eigenvalues=tuple(float(v) for v in values[::-1]), error_bound=error)


def is_ramanujan(report, tolerance=None):
    tolerance = resolve(tolerance, 'SPECTRAL_TOLERANCE')
    return report.lam <= report.ramanujan_threshold + tolerance + report.error_bound


@dataclass(frozen=True)
class MixingCheck:
    pairs: int
    expected: Fraction
    lhs: Fraction
    rhs: float
    tolerance: float

    @property
    def holds(self):
        return float(self.lhs) <= self.rhs + self.tolerance


def verify_mixing(graph, first, second, report=None):
    """|E(S,T) - k|S||T|/n| <= lam sqrt(|S||T|), counting ordered adjacent pairs (s, t)."""
    if graph.regular_degree is None:
        raise PreconditionError("the mixing lemma is stated for regular graphs")
    report = report or adjacency_spectrum(graph)
    first, second = set(first), set(second)
    pairs = sum(len(graph.neighbors(s) & second) for s in first)
    expected = Fraction(report.k * len(first) * len(second), graph.n)
    root = math.sqrt(len(first) * len(second))
    tolerance = (report.error_bound + resolve(None, 'SPECTRAL_TOLERANCE')) * max(root, 1.0)
    return MixingCheck(pairs=pairs, expected=expected, lhs=abs(pairs - expected),
                       rhs=report.lam * root, tolerance=tolerance)


def is_quadrilateral_free(graph):
    """No two distinct vertices with two or more common neighbours (via the squared adjacency)."""
    if graph.n == 0 or not graph.edges:
        return True
    rows, cols = np.asarray(graph.edges, dtype=np.int64).T
    matrix = sparse.coo_matrix((np.ones(2 * len(rows), dtype=np.int64),
                                (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
                               shape=(graph.n, graph.n)).tocsr()
    common = (matrix @ matrix).tolil()
    common.setdiag(0)
    common = common.tocsr()
    common.eliminate_zeros()
    return common.nnz == 0 or bool(common.max() <= 1)


def quadrilateral_free_by_neighbours(graph):
    for u in range(graph.n):
        for v in range(u + 1, graph.n):
            if len(graph.neighbors(u) & graph.neighbors(v)) >= 2:
                return False
    return True


def girth(graph):
    """Length of a shortest cycle by BFS from every vertex; math.inf when acyclic."""
    best = math.inf
    for root in range(graph.n):
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for v in graph.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best
