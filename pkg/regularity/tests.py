import itertools
from fractions import Fraction
from math import prod

import numpy as np
from django.test import SimpleTestCase

from overlap_lab.exceptions import PreconditionError, ValidationProblem

from geometry.points import Point, PointSet, random_point_set
from hypergraphs.constructions import random_regular_hypergraph
from hypergraphs.structures import Hypergraph, complete_hypergraph
from partitions.homogeneity import NONE_CONTAIN, homogeneity_test

from .cover import (
    cover_parameters, geometric_hypergraph, homogeneous_cover, homogeneous_partition, recount_cover,
)
from .density import (
    UNFALSIFIED_SAMPLED, VERIFIED_EXHAUSTIVE, DensityState, density_increment, find_superregular,
    measure_density, partite_split, tuple_density,
)
from .serializers import CoverResultSerializer, history_csv

OFF_CENTRE = Point.of(Fraction(1, 2) + Fraction(1, 30001), Fraction(1, 2) + Fraction(1, 70001))

# 2-uniform toy: every edge runs from {2, 3} to {4, ..., 7}
TOY = Hypergraph(8, 2, tuple((a, b) for a in (2, 3) for b in (4, 5, 6, 7)))
TOY_BLOCKS = ((0, 1, 2, 3), (4, 5, 6, 7))
TOY_WITNESS = ((0, 1), (4, 5, 6, 7))


def random_hypergraph(n, m, seed):
    rng = np.random.default_rng(seed)
    triples = list(itertools.combinations(range(n), 3))
    chosen = rng.choice(len(triples), size=m, replace=False)
    return Hypergraph(n, 3, tuple(triples[int(i)] for i in chosen))


def has_witness(hypergraph, blocks, gamma, delta):
    """Brute force over every Y_1..Y_h."""
    def subsets(block):
        return [s for r in range(1, len(block) + 1) for s in itertools.combinations(block, r)]
    whole = prod(len(b) for b in blocks)
    for ys in itertools.product(*(subsets(b) for b in blocks)):
        if prod(len(y) for y in ys) >= gamma * whole and tuple_density(hypergraph, ys) < delta:
            return True
    return False


class PartiteSplitTests(SimpleTestCase):
    def test_measure_density(self):
        self.assertEqual(measure_density(complete_hypergraph(6, 3)), Fraction(120, 216))

    def test_complete_hypergraph_split_is_full(self):
        blocks, density = partite_split(complete_hypergraph(6, 3))
        self.assertEqual(density, 1)
        self.assertEqual(sorted(len(b) for b in blocks), [2, 2, 2])

    def test_single_edge(self):
        blocks, density = partite_split(Hypergraph(3, 3, ((0, 1, 2),)))
        self.assertEqual(density, 1)

    def test_random_hypergraph_keeps_half_the_density(self):
        hypergraph = random_regular_hypergraph(12, 3, 3, seed=4)
        blocks, density = partite_split(hypergraph, seed=1)
        self.assertGreaterEqual(density, measure_density(hypergraph) / 2)
        self.assertEqual(density, tuple_density(hypergraph, blocks))

    def test_requires_divisible_order(self):
        with self.assertRaises(ValidationProblem):
            partite_split(complete_hypergraph(7, 3))

    def test_empty_hypergraph(self):
        with self.assertRaises(PreconditionError):
            partite_split(Hypergraph(6, 3, ()))


class DensityIncrementTests(SimpleTestCase):
    def test_increment_bound(self):
        step = density_increment(TOY, TOY_BLOCKS, Fraction(1, 2), Fraction(1, 8), TOY_WITNESS)
        self.assertEqual(step.bound, Fraction(3, 4))
        self.assertGreaterEqual(step.density, Fraction(3, 4))
        self.assertEqual(step.density, tuple_density(TOY, step.blocks))

    def test_best_pattern_is_chosen(self):
        step = density_increment(TOY, TOY_BLOCKS, Fraction(1, 2), Fraction(1, 8), TOY_WITNESS)
        self.assertEqual(step.pattern, (1, 0))
        self.assertEqual(step.blocks, ((2, 3), (4, 5, 6, 7)))

    def test_non_positive_increment_refused(self):
        with self.assertRaises(PreconditionError):
            density_increment(TOY, TOY_BLOCKS, Fraction(1, 2), Fraction(1, 4), TOY_WITNESS)

    def test_invalid_witness(self):
        with self.assertRaises(ValidationProblem):
            density_increment(TOY, TOY_BLOCKS, Fraction(1, 2), Fraction(1, 8), ((0, 4), (5, 6)))
        with self.assertRaises(ValidationProblem):
            density_increment(TOY, TOY_BLOCKS, Fraction(1, 2), Fraction(1, 8), ((2, 3), (4, 5, 6, 7)))

    def test_state_tracks_history(self):
        state = DensityState(TOY_BLOCKS, Fraction(1, 2))
        state.advance(((2, 3), (4, 5, 6, 7)), Fraction(1))
        self.assertEqual(state.iteration, 1)
        self.assertEqual(state.history[-1], ((2, 4), Fraction(1)))
        self.assertEqual(history_csv(state).splitlines()[0], 'iteration,sizes,density')
        self.assertEqual(history_csv(state).splitlines()[2], '1,2;4,1')


class SuperregularTests(SimpleTestCase):
    def test_complete_hypergraph_is_verified_at_once(self):
        result = find_superregular(complete_hypergraph(6, 3), Fraction(1, 2), Fraction(1, 16))
        self.assertEqual(result.status, VERIFIED_EXHAUSTIVE)
        self.assertEqual(result.density, 1)
        self.assertEqual(result.state.iteration, 0)

    def test_sparse_hypergraph_rejected(self):
        with self.assertRaises(PreconditionError):
            find_superregular(Hypergraph(6, 3, ((0, 1, 2),)), Fraction(1, 2), Fraction(1, 8))

    def test_exhaustive_and_sampled_runs(self):
        for seed in range(4):
            hypergraph = random_hypergraph(9, 40, seed)
            gamma, delta = Fraction(1, 2), Fraction(1, 32)
            exact = find_superregular(hypergraph, gamma, delta, seed=seed)
            sampled = find_superregular(hypergraph, gamma, delta, seed=seed, exhaustive_limit=0, witness_budget=200)
            self.assertEqual(exact.status, VERIFIED_EXHAUSTIVE)
            self.assertEqual(sampled.status, UNFALSIFIED_SAMPLED)
            self.assertFalse(has_witness(hypergraph, exact.blocks, gamma, delta))
            for result in (exact, sampled):
                self.assertLessEqual(result.state.iteration, result.iteration_cap)
                self.assertEqual(result.density, tuple_density(hypergraph, result.blocks))

    def test_densities_never_decrease(self):
        hypergraph = random_hypergraph(9, 30, 11)
        result = find_superregular(hypergraph, Fraction(1, 3), Fraction(1, 40), seed=2)
        densities = [d for _, d in result.state.history]
        self.assertEqual(densities, sorted(set(densities)))


class CoverTests(SimpleTestCase):
    def setUp(self):
        self.points = random_point_set(18, np.random.default_rng(3), disk=True)

    def test_geometric_hypergraph_matches_brute_force(self):
        hypergraph = geometric_hypergraph(self.points, OFF_CENTRE)
        expected = [t for t in itertools.combinations(range(18), 3)
                    if homogeneity_test(OFF_CENTRE, [[self.points[i]] for i in t]).status != NONE_CONTAIN]
        self.assertEqual(list(hypergraph.edges), expected)

    def test_cover_recount_and_size(self):
        cover = homogeneous_cover(self.points, OFF_CENTRE, Fraction(1, 2), beta=Fraction(1, 50), splits=4)
        self.assertEqual(recount_cover(18, [t.blocks for t in cover.tuples]), cover.covered)
        self.assertLessEqual(len(cover.tuples), 50)
        for t in cover.tuples:
            sets = [[self.points[i] for i in b] for b in t.blocks]
            self.assertTrue(homogeneity_test(OFF_CENTRE, sets, method='brute').homogeneous)
        self.assertEqual(CoverResultSerializer(cover).data['covered'], cover.covered)

    def test_half_plane_points(self):
        shifted = PointSet(tuple(Point.of(1 + p[0], 1 + p[1]) for p in self.points))
        self.assertEqual(len(geometric_hypergraph(shifted, Point.of(0, 0))), 0)
        cover = homogeneous_cover(shifted, Point.of(0, 0), Fraction(1, 2), beta=Fraction(1, 50), splits=4)
        self.assertGreater(cover.covered, 0)
        self.assertTrue(all(t.status == NONE_CONTAIN for t in cover.tuples))

    def test_parameters(self):
        params = cover_parameters(3, Fraction(1, 2), Fraction(1, 10))
        self.assertEqual(params.delta, Fraction(1, 80))
        self.assertEqual(params.gamma, Fraction(1, 8))
        self.assertLess(params.log10_beta, 0)
        self.assertAlmostEqual(params.log10_L, -params.log10_beta)

    def test_homogeneous_partition(self):
        result = homogeneous_partition(self.points, OFF_CENTRE, 6, Fraction(1, 2), beta=Fraction(1, 50), splits=4)
        self.assertEqual([len(b) for b in result.partition.blocks], [3] * 6)
        self.assertEqual(result.audit.tuples, 20)
        self.assertEqual(result.audit.unknown, 0)
