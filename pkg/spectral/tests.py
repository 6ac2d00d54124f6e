import math

import numpy as np
from django.test import SimpleTestCase

from overlap_lab.exceptions import PreconditionError, ValidationProblem

from hypergraphs.graphs import (
    complete_graph, cycle_graph, path_graph, petersen_graph, projective_plane_incidence, random_regular_graph,
)
from hypergraphs.structures import Graph

from .analysis import (
    adjacency_spectrum, girth, is_quadrilateral_free, is_ramanujan, quadrilateral_free_by_neighbours,
    verify_mixing,
)
from .serializers import MixingCheckSerializer, SpectralReportSerializer


class SpectrumTests(SimpleTestCase):
    def test_complete_graph(self):
        report = adjacency_spectrum(complete_graph(4))
        np.testing.assert_allclose(report.eigenvalues, [3, -1, -1, -1], atol=1e-9)
        self.assertAlmostEqual(report.lam, 1)
        self.assertTrue(report.regular)
        self.assertLess(report.error_bound, 1e-9)

    def test_even_cycle_is_bipartite(self):
        report = adjacency_spectrum(cycle_graph(6))
        self.assertAlmostEqual(report.lam, 2)
        self.assertAlmostEqual(report.eigenvalues[-1], -2)

    def test_petersen_is_ramanujan(self):
        report = adjacency_spectrum(petersen_graph())
        self.assertAlmostEqual(report.lam, 2)
        self.assertTrue(is_ramanujan(report))

    def test_projective_plane_lambda_equals_degree(self):
        report = adjacency_spectrum(projective_plane_incidence(3))
        self.assertAlmostEqual(report.lam, 4)

    def test_trace_and_second_moment(self):
        for graph in (petersen_graph(), random_regular_graph(50, 3, seed=8), projective_plane_incidence(3)):
            values = np.array(adjacency_spectrum(graph).eigenvalues)
            self.assertAlmostEqual(values.sum(), 0, places=8)
            self.assertAlmostEqual((values ** 2).sum(), 2 * len(graph.edges), places=8)

    def test_irregular_graph_uses_the_maximum_degree(self):
        with self.assertLogs('spectral.analysis', level='WARNING'):
            report = adjacency_spectrum(path_graph(4))
        self.assertFalse(report.regular)
        self.assertEqual(report.k, 2)

    def test_empty_graph(self):
        with self.assertRaises(ValidationProblem):
            adjacency_spectrum(Graph(0, ()))

    def test_payload(self):
        data = SpectralReportSerializer(adjacency_spectrum(petersen_graph())).data
        self.assertEqual(len(data['eigenvalues']), 10)
        self.assertAlmostEqual(float(data['lam']), 2)
        self.assertTrue(data['ramanujan'])


class MixingTests(SimpleTestCase):
    def test_random_subsets_obey_the_mixing_bound(self):
        rng = np.random.default_rng(11)
        for seed in range(5):
            graph = random_regular_graph(50, 3, seed=seed)
            report = adjacency_spectrum(graph)
            for _ in range(500):
                first = rng.choice(50, size=int(rng.integers(1, 51)), replace=False)
                second = rng.choice(50, size=int(rng.integers(1, 51)), replace=False)
                check = verify_mixing(graph, first.tolist(), second.tolist(), report)
                self.assertTrue(check.holds, MixingCheckSerializer(check).data)

    def test_whole_vertex_set_is_exact(self):
        graph = petersen_graph()
        check = verify_mixing(graph, range(10), range(10))
        self.assertEqual(check.pairs, 30)
        self.assertEqual(check.lhs, 0)

    def test_irregular_graphs_are_rejected(self):
        with self.assertRaises(PreconditionError):
            verify_mixing(path_graph(5), [0], [1])


class CycleStructureTests(SimpleTestCase):
    def test_quadrilaterals(self):
        self.assertFalse(is_quadrilateral_free(cycle_graph(4)))
        self.assertFalse(is_quadrilateral_free(complete_graph(4)))
        self.assertTrue(is_quadrilateral_free(petersen_graph()))
        self.assertTrue(is_quadrilateral_free(projective_plane_incidence(2)))
        self.assertTrue(is_quadrilateral_free(Graph(3, ())))

    def test_sparse_check_matches_neighbour_scan(self):
        for seed in range(6):
            graph = random_regular_graph(14, 3, seed=seed)
            self.assertEqual(is_quadrilateral_free(graph), quadrilateral_free_by_neighbours(graph))

    def test_girth(self):
        self.assertEqual(girth(petersen_graph()), 5)
        self.assertEqual(girth(cycle_graph(7)), 7)
        self.assertEqual(girth(complete_graph(4)), 3)
        self.assertEqual(girth(path_graph(5)), math.inf)
