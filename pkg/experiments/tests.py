import dataclasses
import itertools
import math
from fractions import Fraction
from math import comb

import numpy as np
from django.test import SimpleTestCase

from overlap_lab.exceptions import (
    ConstructionError, DimensionMismatch, InvariantViolation, PreconditionError, ValidationProblem,
)

from geometry.overlap import deep_point_complete, overlap_value
from geometry.points import PointSet, random_point_set
from geometry.serializers import PointSetSerializer, point_set_payload, render_json
from hypergraphs.constructions import first_vertices_hypergraph
from hypergraphs.graphs import cycle_graph, path_graph, petersen_graph
from hypergraphs.structures import Hypergraph, complete_hypergraph
from partitions.sectors import ceder_partition

from .config import ExperimentConfig
from .embeddings import (
    adversarial_embedding, anneal_chain, azuma_deviation_bound, bijection_study, random_bijection_overlap,
    reduce_chains,
)
from .estimates import estimate_c_complete, point_duplication_check, structured_family, trend_table
from .pipeline import core_size_bound, core_vertices, expander_overlap_pipeline, walk_recursion_audit
from .serializers import ExpanderReportSerializer, OverlapEstimateSerializer, WalkAuditSerializer, trend_csv

SINGLE_TRIANGLE = Hypergraph(3, 3, ((0, 1, 2),))
MATCHING = Hypergraph(9, 3, ((0, 1, 2), (3, 4, 5), (6, 7, 8)))
QUICK = ExperimentConfig(seed=7, trials=3, chains=2, steps=15)


class ExperimentConfigTests(SimpleTestCase):
    def test_rejects_bad_schedule(self):
        with self.assertRaises(ValidationProblem):
            ExperimentConfig(cooling=1.0)
        with self.assertRaises(ValidationProblem):
            ExperimentConfig(trials=0)

    def test_options_ignore_unknown_and_unset_keys(self):
        cfg = ExperimentConfig.from_options(seed=None, trials=5, verbosity=2)
        self.assertEqual(cfg.trials, 5)
        self.assertEqual(cfg.seed, 0)

    def test_spawned_seeds_are_reproducible(self):
        self.assertEqual(QUICK.spawn_seeds(4), QUICK.spawn_seeds(4))
        self.assertEqual(QUICK.spawn_seeds(4)[:2], QUICK.spawn_seeds(2))
        self.assertNotEqual(QUICK.spawn_seeds(2), QUICK.spawn_seeds(2, salt=1))


class AzumaBoundTests(SimpleTestCase):
    def test_zero_deviation_is_vacuous(self):
        self.assertEqual(azuma_deviation_bound(3, 1, 100, 0), 2)

    def test_direct_substitution(self):
        self.assertAlmostEqual(azuma_deviation_bound(3, 1, 100, 7), 2 * math.exp(-0.5))
        self.assertAlmostEqual(azuma_deviation_bound(3, 1, 100, 7), 1.2131, places=4)

    def test_monotone_in_lambda_and_degree(self):
        by_lambda = [azuma_deviation_bound(3, 2, 50, lam) for lam in (1, 2, 4, 8)]
        self.assertEqual(by_lambda, sorted(by_lambda, reverse=True))
        by_degree = [azuma_deviation_bound(3, delta, 50, 5) for delta in (1, 2, 3)]
        self.assertEqual(by_degree, sorted(by_degree))

    def test_negative_lambda_rejected(self):
        with self.assertRaises(ValidationProblem):
            azuma_deviation_bound(3, 1, 10, -1)


class RandomBijectionTests(SimpleTestCase):
    def setUp(self):
        self.points = random_point_set(9, np.random.default_rng(5))

    def test_complete_hypergraph_ignores_the_bijection(self):
        deep = deep_point_complete(self.points)
        for seed in range(4):
            report = random_bijection_overlap(complete_hypergraph(9, 3), self.points, seed)
            self.assertEqual(report.covered, deep.covered)

    def test_size_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            random_bijection_overlap(complete_hypergraph(8, 3), self.points, 0)

    def test_matching_study(self):
        study = bijection_study(MATCHING, self.points, seed=1, trials=40)
        self.assertEqual(len(study.counts), 40)
        self.assertTrue(set(study.counts) <= {1, 2, 3})
        self.assertLessEqual(study.mean, study.maximum)
        self.assertLessEqual(study.p95, study.maximum)
        self.assertEqual(study.expected_hits, Fraction(3 * study.deep_count, comb(9, 3)))
        self.assertEqual([lam for lam, _ in study.azuma], [1, 2, 4, 8, 16, 32])

    def test_study_is_deterministic(self):
        first = bijection_study(MATCHING, self.points, seed=3, trials=12)
        second = bijection_study(MATCHING, self.points, seed=3, trials=12)
        self.assertEqual(first.counts, second.counts)

    def test_worker_chunks_match_serial_run(self):
        serial = bijection_study(MATCHING, self.points, seed=3, trials=12)
        chunked = bijection_study(MATCHING, self.points, seed=3, trials=12, threads=5, use_async=True)
        self.assertEqual(serial.counts, chunked.counts)


class AnnealingTests(SimpleTestCase):
    def test_single_triangle_is_always_covered(self):
        result = adversarial_embedding(SINGLE_TRIANGLE, QUICK)
        self.assertEqual(result.fraction, 1)

    def test_first_vertices_hypergraph_stays_above_half(self):
        result = adversarial_embedding(first_vertices_hypergraph(7, 2), QUICK)
        self.assertGreaterEqual(result.fraction, Fraction(1, 2))

    def test_six_points_keep_eight_of_twenty(self):
        # one point per sector around the apex puts it in at least 8 triangles
        result = adversarial_embedding(complete_hypergraph(6, 3), QUICK)
        self.assertGreaterEqual(result.covered, 8)

    def test_more_steps_never_return_more(self):
        hypergraph = complete_hypergraph(7, 3)
        seed = QUICK.spawn_seeds(1)[0]
        short = anneal_chain(hypergraph, seed, ExperimentConfig(seed=7, steps=10))
        longer = anneal_chain(hypergraph, seed, ExperimentConfig(seed=7, steps=40))
        self.assertLessEqual(longer.covered, short.covered)
        self.assertEqual(longer.best_history[:11], short.best_history)
        self.assertEqual(longer.best_history, sorted(longer.best_history, reverse=True))

    def test_witness_reloads_to_the_same_overlap(self):
        hypergraph = complete_hypergraph(7, 3)
        result = adversarial_embedding(hypergraph, QUICK)
        serializer = PointSetSerializer(data=point_set_payload(result.embedding))
        serializer.is_valid(raise_exception=True)
        reloaded = serializer.save()
        self.assertEqual(overlap_value(hypergraph, reloaded).covered, result.covered)

    def test_chains_through_workers_match_serial(self):
        hypergraph = complete_hypergraph(6, 3)
        serial = adversarial_embedding(hypergraph, QUICK)
        dispatched = adversarial_embedding(hypergraph, QUICK, use_async=True)
        self.assertEqual(serial.chains, dispatched.chains)
        self.assertEqual(serial.embedding, dispatched.embedding)

    def test_chain_that_misreports_its_overlap(self):
        hypergraph = complete_hypergraph(6, 3)
        chain = anneal_chain(hypergraph, QUICK.spawn_seeds(1)[0], QUICK)
        self.assertEqual(reduce_chains(hypergraph, [chain]).covered, chain.covered)
        with self.assertRaises(InvariantViolation):
            reduce_chains(hypergraph, [dataclasses.replace(chain, covered=chain.covered - 1)])


class CompleteEstimateTests(SimpleTestCase):
    def test_three_points_give_one(self):
        estimate = estimate_c_complete(3, 2, QUICK)
        self.assertEqual(estimate.upper, 1)
        self.assertTrue(estimate.settled)

    def test_four_points_match_structured_family(self):
        estimate = estimate_c_complete(4, 2, QUICK)
        family_minimum = min(deep_point_complete(p).fraction for _, p in structured_family(4))
        self.assertEqual(estimate.upper, family_minimum)
        self.assertEqual(estimate.upper, 1)

    def test_structured_family_is_in_general_position(self):
        family = structured_family(10)
        self.assertIn('convex', [name for name, _ in family])
        for _, points in family:
            self.assertEqual(len(points), 10)
            self.assertTrue(points.general_position)

    def test_planar_only(self):
        with self.assertRaises(DimensionMismatch):
            estimate_c_complete(5, 3, QUICK)

    def test_trend_rows_and_csv(self):
        rows = trend_table([3, 4, 6], ExperimentConfig(seed=1, steps=0))
        self.assertEqual([r.n for r in rows], [3, 4, 6])
        self.assertEqual(rows[0].upper, 1)
        self.assertGreaterEqual(rows[2].upper, Fraction(2, 5))
        text = trend_csv(rows)
        self.assertTrue(text.startswith('n,upper,upper_float,method,family\n3,1,1.000000,'))

    def test_estimate_payload_renders(self):
        payload = OverlapEstimateSerializer(estimate_c_complete(5, 2, ExperimentConfig(steps=0))).data
        self.assertIsNone(payload['lower'])
        self.assertEqual(len(payload['witness']['points']), 5)


class PointDuplicationTests(SimpleTestCase):
    def test_clusters_stay_within_the_degenerate_share(self):
        points = random_point_set(6, np.random.default_rng(2))
        check = point_duplication_check(points, 2)
        self.assertEqual(check.degenerate, 1 - Fraction(8 * 20, comb(12, 3)))
        self.assertTrue(check.passed)

    def test_single_copy_changes_nothing(self):
        points = random_point_set(7, np.random.default_rng(4))
        check = point_duplication_check(points, 1)
        self.assertEqual(check.before, check.after)
        self.assertEqual(check.degenerate, 0)


class ExpanderPipelineTests(SimpleTestCase):
    def test_petersen_pipeline(self):
        report = expander_overlap_pipeline(petersen_graph(), QUICK)
        self.assertEqual((report.n, report.k, report.edges), (10, 3, 10))
        self.assertAlmostEqual(report.lam, 2.0, places=6)
        self.assertEqual(len(report.embeddings), QUICK.trials + 1)
        for audit in report.embeddings:
            self.assertTrue(audit.core_bound_vacuous)
            self.assertLessEqual(audit.apex_covered, audit.covered)
        self.assertAlmostEqual(report.deficits['spectral'], 16 / 9, places=6)
        self.assertAlmostEqual(report.deficits['degree'], 1 / 3)
        render_json(ExpanderReportSerializer(report).data)

    def test_core_matches_definition(self):
        graph = petersen_graph()
        points = random_point_set(10, np.random.default_rng(8))
        sectors = ceder_partition(points).sectors
        threshold = Fraction(1, 2) * 3 / 6
        expected = [i for i in range(10)
                    if all(len(graph.neighbors(i) & set(s)) >= threshold for s in sectors)]
        self.assertEqual(core_vertices(graph, sectors, Fraction(1, 2)), expected)

    def test_core_bound_formula(self):
        self.assertLess(core_size_bound(10, 3, 2.0, 0.5), 0)
        self.assertAlmostEqual(core_size_bound(100, 60, 1.0, 0.5), 100 * (1 - 36 / (0.25 * 3600)))

    def test_four_cycle_is_rejected(self):
        with self.assertRaises(ConstructionError):
            expander_overlap_pipeline(cycle_graph(4), QUICK)


class WalkRecursionTests(SimpleTestCase):
    def brute_force_starts(self, graph, blocks):
        starts = set()
        for walk in itertools.product(*blocks):
            if all(walk[i + 1] in graph.neighbors(walk[i]) for i in range(len(walk) - 1)):
                starts.add(walk[0])
        return len(starts)

    def test_petersen_blocks(self):
        graph = petersen_graph()
        blocks = [(0, 1, 2), (3, 4, 5), (6, 7, 8, 9)]
        audit = walk_recursion_audit(graph, blocks)
        self.assertEqual(audit.completing, self.brute_force_starts(graph, blocks))
        self.assertEqual(audit.sizes[0], audit.completing)
        self.assertEqual(audit.c_prime, Fraction(3, 10))
        self.assertEqual(len(WalkAuditSerializer(audit).data['bounds']), 2)

    def test_cycle_blocks(self):
        graph = cycle_graph(12)
        blocks = [(2, 3), (4,), (5, 6)]
        audit = walk_recursion_audit(graph, blocks)
        self.assertEqual(audit.completing, 1)
        self.assertEqual(audit.sizes, [1, 1, 2])
        self.assertEqual(audit.pruned[0], [3])

    def test_irregular_graph(self):
        with self.assertRaises(PreconditionError):
            walk_recursion_audit(path_graph(6), [(0, 1), (2, 3)])

    def test_overlapping_blocks(self):
        with self.assertRaises(ValidationProblem):
            walk_recursion_audit(petersen_graph(), [(0, 1), (1, 2)])
