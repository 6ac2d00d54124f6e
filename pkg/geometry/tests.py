import itertools
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from rest_framework import serializers

from overlap_lab.exceptions import (
    DegenerateSimplexError, DimensionMismatch, GeneralPositionError, ValidationProblem,
)

from hypergraphs.structures import Hypergraph, complete_hypergraph

from .angular import sort_by_angle
from .arrangement import candidate_points, containment_matrix
from .depth import brute_force_depth, depth_report, simplicial_depth
from .overlap import EXACT_ARRANGEMENT, GRID, MONTE_CARLO, deep_point_complete, overlap_value
from .points import Embedding, Point, PointSet, random_point_set, snap, to_rational
from .predicates import determinant, general_position_check, orientation, point_in_simplex
from .serializers import (
    DepthReportSerializer, OverlapReportSerializer, PointSetSerializer, load_point_set_csv, point_set_csv,
)

HEXAGON = PointSet((Point.of(2, 0), Point.of(1, 2), Point.of(-1, 2), Point.of(-2, 0), Point.of(-1, -2),
                    Point.of(1, -2)))
ORIGIN = Point.of(0, 0)


def sampled_hypergraph(n, size, rng):
    triples = list(itertools.combinations(range(n), 3))
    picks = rng.choice(len(triples), size=size, replace=False)
    return Hypergraph(n, 3, tuple(triples[i] for i in picks))


class PointTests(SimpleTestCase):
    def test_rational_coordinates(self):
        self.assertEqual(to_rational('1/3'), Fraction(1, 3))
        self.assertEqual(to_rational('0.25'), Fraction(1, 4))
        self.assertEqual(to_rational(0.5), Fraction(1, 2))
        self.assertEqual(Point.of('1/2', 3).coords, (Fraction(1, 2), Fraction(3)))

    def test_bad_coordinates_are_rejected(self):
        for value in (True, float('inf'), 'x', '1/0', None):
            with self.assertRaises(ValidationProblem):
                to_rational(value)

    def test_mixed_dimensions(self):
        with self.assertRaises(DimensionMismatch):
            PointSet((Point.of(0, 0), Point.of(1, 2, 3)))

    def test_snap(self):
        self.assertEqual(snap(0.30001, 1000), Fraction(3, 10))

    def test_random_point_sets_are_seeded_and_in_general_position(self):
        first = random_point_set(15, np.random.default_rng(4))
        second = random_point_set(15, np.random.default_rng(4))
        self.assertEqual(first, second)
        self.assertTrue(first.general_position)
        self.assertEqual(len(set(first.points)), 15)

    def test_embedding_from_bijection(self):
        points = PointSet((Point.of(0, 0), Point.of(1, 0), Point.of(0, 1)))
        embedding = Embedding.from_bijection(points, [2, 0, 1])
        self.assertEqual(embedding[0], Point.of(0, 1))
        with self.assertRaises(ValidationProblem):
            Embedding.from_bijection(points, [0, 0, 1])


class PredicateTests(SimpleTestCase):
    def test_orientation(self):
        self.assertEqual(orientation((0, 0), (1, 0), (0, 1)), 1)
        self.assertEqual(orientation((0, 0), (0, 1), (1, 0)), -1)
        self.assertEqual(orientation((0, 0), (1, 1), (2, 2)), 0)

    def test_determinant(self):
        self.assertEqual(determinant([[2, 0, 1], [1, 3, 2], [1, 1, 2]]), Fraction(6))
        self.assertEqual(determinant([[1, 2], [2, 4]]), 0)

    def test_closed_containment_includes_the_boundary(self):
        triangle = [(0, 0), (2, 0), (0, 2)]
        self.assertTrue(point_in_simplex((1, 0), triangle))
        self.assertTrue(point_in_simplex((1, 1), triangle))
        self.assertFalse(point_in_simplex((Fraction(3, 2), 1), triangle))

    def test_tetrahedron_containment(self):
        tetra = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        self.assertTrue(point_in_simplex((Fraction(1, 4),) * 3, tetra))
        self.assertTrue(point_in_simplex((0, 0, Fraction(1, 2)), tetra))
        self.assertFalse(point_in_simplex((1, 1, 1), tetra))

    def test_containment_ignores_vertex_order(self):
        triangle = [Point.of(0, 0), Point.of(4, 1), Point.of(1, 3)]
        queries = [Point.of(1, 1), Point.of(2, Fraction(1, 2)), Point.of(Fraction(1, 2), Fraction(3, 2)),
                   Point.of(4, 1), Point.of(3, 3), Point.of(-1, 0)]
        tetra = [Point.of(0, 0, 0), Point.of(3, 0, 0), Point.of(0, 2, 0), Point.of(1, 1, 4)]
        spatial = [Point.of(1, Fraction(1, 2), 1), Point.of(1, 1, 0), Point.of(Fraction(1, 2), 0, 0),
                   Point.of(0, 0, 0), Point.of(3, 3, 3)]
        for simplex, points in ((triangle, queries), (tetra, spatial)):
            for q in points:
                expected = point_in_simplex(q, simplex)
                for order in itertools.permutations(simplex):
                    self.assertEqual(point_in_simplex(q, list(order)), expected, f"{q} in {order}")
        # the edge midpoint and the vertex sit on the boundary and still count
        self.assertTrue(point_in_simplex(queries[1], triangle))
        self.assertTrue(point_in_simplex(queries[3], triangle))
        self.assertTrue(point_in_simplex(spatial[1], tetra))

    def test_degenerate_simplex(self):
        with self.assertRaises(DegenerateSimplexError):
            point_in_simplex((0, 0), [(0, 0), (1, 1), (2, 2)])

    def test_general_position(self):
        self.assertTrue(general_position_check(HEXAGON))
        collinear = PointSet((Point.of(0, 0), Point.of(1, 1), Point.of(5, 0), Point.of(3, 3)))
        self.assertFalse(general_position_check(collinear))
        spatial = PointSet((Point.of(0, 0, 0), Point.of(1, 0, 0), Point.of(0, 1, 0), Point.of(1, 1, 0)))
        self.assertFalse(general_position_check(spatial))

    def test_angular_order(self):
        points = [(1, 0), (0, -1), (-1, 0), (0, 1)]
        self.assertEqual(sort_by_angle((0, 0), points), [0, 3, 2, 1])


class DepthTests(SimpleTestCase):
    def test_hexagon_centre(self):
        # two alternating triangles strictly, twelve through a diagonal on their boundary
        self.assertEqual(simplicial_depth(ORIGIN, HEXAGON.points), 14)
        report = depth_report(ORIGIN, HEXAGON.points)
        self.assertEqual(report.total, 20)
        self.assertEqual(report.fraction, Fraction(7, 10))
        self.assertEqual(report.method, 'brute-force')

    def test_fast_depth_matches_enumeration(self):
        rng = np.random.default_rng(8)
        for trial in range(100):
            points = random_point_set(12, rng).points
            x, y = rng.integers(1, 9999, size=2)
            q = Point.of(Fraction(int(x), 9973), Fraction(int(y), 9967))
            self.assertEqual(simplicial_depth(q, points), brute_force_depth(q, points), f"set {trial}")
            a, b, c = points[:3]
            inner = Point.of((a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3)
            self.assertEqual(simplicial_depth(inner, points), brute_force_depth(inner, points), f"set {trial}")

    def test_query_on_an_input_point(self):
        points = random_point_set(7, np.random.default_rng(1)).points
        report = depth_report(points[0], points)
        self.assertTrue(report.coincident)
        self.assertGreaterEqual(report.count, 15)
        self.assertEqual(report.count, simplicial_depth(points[0], points, method='brute'))

    def test_small_and_spatial_inputs(self):
        self.assertEqual(simplicial_depth(ORIGIN, [Point.of(1, 0), Point.of(0, 1)]), 0)
        with self.assertRaises(DimensionMismatch):
            simplicial_depth(Point.of(0, 0, 0), [Point.of(1, 0, 0)] * 3)

    def test_report_payload(self):
        data = DepthReportSerializer(depth_report(ORIGIN, HEXAGON.points)).data
        self.assertEqual(data['query'], ['0', '0'])
        self.assertEqual(data['fraction'], '7/10')


class OverlapTests(SimpleTestCase):
    def test_single_triangle(self):
        points = PointSet((Point.of(0, 0), Point.of(1, 0), Point.of(0, 1)))
        report = overlap_value(Hypergraph(3, 3, ((0, 1, 2),)), points)
        self.assertEqual(report.fraction, 1)
        self.assertEqual(report.method, EXACT_ARRANGEMENT)
        self.assertFalse(report.lower_bound)

    def test_sweep_matches_candidates(self):
        rng = np.random.default_rng(17)
        for trial in range(20):
            n = 4 + trial % 5
            points = random_point_set(n, rng)
            size = int(rng.integers(1, min(12, n * (n - 1) * (n - 2) // 6) + 1))
            hypergraph = sampled_hypergraph(n, size, rng)
            sweep = overlap_value(hypergraph, points, method='sweep')
            candidates = overlap_value(hypergraph, points, method='candidates')
            self.assertEqual(sweep.covered, candidates.covered, f"trial {trial}, n={n}")

    def test_witness_reaches_the_reported_coverage(self):
        rng = np.random.default_rng(23)
        points = random_point_set(8, rng)
        hypergraph = sampled_hypergraph(8, 20, rng)
        report = overlap_value(hypergraph, points)
        hits = containment_matrix(points, list(hypergraph.edges), [report.witness]).sum()
        self.assertEqual(int(hits), report.covered)

    def test_estimates_stay_below_the_exact_value(self):
        rng = np.random.default_rng(5)
        points = random_point_set(7, rng)
        hypergraph = complete_hypergraph(7, 3)
        exact = overlap_value(hypergraph, points)
        grid = overlap_value(hypergraph, points, method='grid', grid_size=9)
        sampled = overlap_value(hypergraph, points, method='monte-carlo', rng=np.random.default_rng(1),
                                samples=400)
        self.assertEqual((grid.method, sampled.method), (GRID, MONTE_CARLO))
        self.assertTrue(grid.lower_bound and sampled.lower_bound)
        self.assertLessEqual(grid.covered, exact.covered)
        self.assertLessEqual(sampled.covered, exact.covered)
        self.assertGreaterEqual(sampled.covered, 1)

    def test_spatial_embeddings_use_sampling(self):
        points = PointSet((Point.of(0, 0, 0), Point.of(1, 0, 0), Point.of(0, 1, 0), Point.of(0, 0, 1),
                           Point.of(1, 1, 1)))
        report = overlap_value(complete_hypergraph(5, 4), points, rng=np.random.default_rng(0), samples=200)
        self.assertEqual(report.method, MONTE_CARLO)
        self.assertGreaterEqual(report.covered, 1)
        with self.assertRaises(DimensionMismatch):
            overlap_value(complete_hypergraph(5, 4), points, method='sweep')

    def test_invalid_embeddings(self):
        points = random_point_set(5, np.random.default_rng(2))
        with self.assertRaises(DimensionMismatch):
            overlap_value(complete_hypergraph(6, 3), points)
        with self.assertRaises(DimensionMismatch):
            overlap_value(complete_hypergraph(5, 4), points)
        with self.assertRaises(ValidationProblem):
            overlap_value(Hypergraph(5, 3, ()), points)
        with self.assertRaises(ValidationProblem):
            overlap_value(complete_hypergraph(5, 3), points, method='magic')
        collinear = PointSet((Point.of(0, 0), Point.of(1, 1), Point.of(2, 2), Point.of(0, 1)))
        with self.assertRaises(GeneralPositionError):
            overlap_value(complete_hypergraph(4, 3), collinear)

    def test_deep_point_of_the_hexagon(self):
        report = deep_point_complete(HEXAGON)
        self.assertEqual(report.covered, 14)
        self.assertEqual(simplicial_depth(report.witness, HEXAGON.points), 14)
        data = OverlapReportSerializer(report).data
        self.assertEqual(data['fraction'], '7/10')

    def test_deep_point_floor_on_thirty_points(self):
        rng = np.random.default_rng(2024)
        for _ in range(2):
            report = deep_point_complete(random_point_set(30, rng))
            self.assertGreaterEqual(report.fraction, Fraction(2, 9) - Fraction(1, 10))

    def test_deep_point_matches_a_brute_scan(self):
        points = random_point_set(9, np.random.default_rng(31))
        report = deep_point_complete(points)
        grid = overlap_value(complete_hypergraph(9, 3), points, method='grid', grid_size=15)
        self.assertGreaterEqual(report.covered, grid.covered)
        self.assertEqual(report.covered, brute_force_depth(report.witness, points.points))


class CandidatePointTests(SimpleTestCase):
    def test_three_points_give_seven_cells(self):
        points = PointSet((Point.of(0, 0), Point.of(3, 1), Point.of(1, 2)))
        self.assertEqual(len(candidate_points(points)), 7)

    def test_five_points_stay_within_the_face_bound(self):
        rng = np.random.default_rng(55)
        for _ in range(5):
            cells = candidate_points(random_point_set(5, rng))
            self.assertGreaterEqual(len(cells), 7)
            self.assertLessEqual(len(cells), 1 + 10 + 45)

    def test_every_grid_pattern_appears_among_candidates(self):
        rng = np.random.default_rng(66)
        grid = [Point.of(Fraction(i, 40), Fraction(j, 40)) for i in range(-8, 49) for j in range(-8, 49)]
        for n in (4, 6, 8):
            points = random_point_set(n, rng)
            triangles = list(itertools.combinations(range(n), 3))
            candidates = candidate_points(points, include_lower_faces=True)
            known = {row.tobytes() for row in containment_matrix(points, triangles, candidates)}
            seen = {row.tobytes() for row in containment_matrix(points, triangles, grid)}
            self.assertEqual(seen - known, set(), f"n={n}")

    def test_collinear_points_are_rejected(self):
        with self.assertRaises(GeneralPositionError):
            candidate_points(PointSet((Point.of(0, 0), Point.of(1, 1), Point.of(2, 2))))


class AffineInvarianceTests(SimpleTestCase):
    MAPS = (([[2, 1], [-1, 3]], ['1/2', -3]), ([[-1, 2], [3, 1]], [0, '7/3']))

    def test_overlap_value_is_unchanged(self):
        rng = np.random.default_rng(77)
        points = random_point_set(8, rng)
        hypergraph = sampled_hypergraph(8, 20, rng)
        expected = overlap_value(hypergraph, points).fraction
        for matrix, offset in self.MAPS:
            self.assertEqual(overlap_value(hypergraph, points.transformed(matrix, offset)).fraction, expected)

    def test_depth_and_containment_are_unchanged(self):
        rng = np.random.default_rng(78)
        points = random_point_set(10, rng)
        queries = PointSet((Point.of('1/2', '1/3'), Point.of('1/7', '5/6'), points[0]))
        for matrix, offset in self.MAPS:
            moved, moved_queries = points.transformed(matrix, offset), queries.transformed(matrix, offset)
            for q, q_moved in zip(queries, moved_queries):
                self.assertEqual(simplicial_depth(q_moved, moved.points), simplicial_depth(q, points.points))
                self.assertEqual(point_in_simplex(q_moved, moved.points[:3]), point_in_simplex(q, points.points[:3]))


class PointSerializerTests(SimpleTestCase):
    def test_csv_is_read_back_exactly(self):
        points = random_point_set(6, np.random.default_rng(12))
        self.assertEqual(load_point_set_csv(point_set_csv(points)), points)

    def test_csv_needs_a_header(self):
        with self.assertRaises(serializers.ValidationError):
            load_point_set_csv("1,2\n3,4\n")
        with self.assertRaises(serializers.ValidationError):
            load_point_set_csv("")

    def test_rows_must_match_the_dimension(self):
        serializer = PointSetSerializer(data={'d': 2, 'points': [['1', '2'], ['1', '2', '3']]})
        self.assertFalse(serializer.is_valid())

    def test_rationals_are_rendered_as_strings(self):
        serializer = PointSetSerializer(data={'d': 2, 'points': [['1/2', '0.75']]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        points = serializer.save()
        self.assertEqual(points[0], Point.of(Fraction(1, 2), Fraction(3, 4)))
