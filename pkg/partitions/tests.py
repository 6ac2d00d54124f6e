import itertools
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from overlap_lab.exceptions import BudgetExhausted, InvariantViolation, ValidationProblem

from geometry.depth import closed_triangle_contains
from geometry.points import Point, PointSet, random_point_set
from geometry.predicates import cross

from .cones import CONES, LabeledPartition, equipartition_sizes, radial_audit, radial_homogeneous_partition
from .homogeneity import (
    ALL_CONTAIN, MIXED, NONE_CONTAIN, UNKNOWN, extract_homogeneous_subsets, ham_sandwich_line_through,
    homogeneity_audit, homogeneity_test,
)
from .plotting import cone_partition_svg, sector_partition_svg
from .sectors import (
    assign_sector, balanced_crossing, bukh_check, ceder_partition, halving_directions, halving_line_apexes,
    opposite_balance, sector_rays,
)
from .serializers import LabeledPartitionSerializer

HEXAGON = [Point.of(2, 0), Point.of(1, 2), Point.of(-1, 2), Point.of(-2, 0), Point.of(-1, -2), Point.of(1, -2)]
ORIGIN = Point.of(0, 0)
OFF_CENTRE = Point.of(Fraction(1, 2) + Fraction(1, 30001), Fraction(1, 2) + Fraction(1, 70001))


def cluster(cx, cy, size, rng, spread=Fraction(1, 100)):
    return [Point.of(cx + spread * Fraction(int(a), 97), cy + spread * Fraction(int(b), 89))
            for a, b in rng.integers(-40, 41, size=(size, 2))]


class SectorPartitionTests(SimpleTestCase):
    def test_hexagon_gets_one_point_per_sector(self):
        partition = ceder_partition(PointSet(tuple(HEXAGON)))
        self.assertEqual(partition.counts, (1,) * 6)
        self.assertEqual(partition.imbalance, 0)

    def test_twelve_random_points_are_balanced(self):
        points = random_point_set(12, np.random.default_rng(3))
        partition = ceder_partition(points)
        self.assertEqual(sum(partition.counts), 12)
        self.assertTrue(all(1 <= c <= 3 for c in partition.counts))

    def test_large_set_uses_halving_sweep(self):
        points = random_point_set(30, np.random.default_rng(11))
        try:
            partition = ceder_partition(points)
        except BudgetExhausted as exc:
            self.fail(f"no sector partition: {exc}")
        self.assertTrue(all(4 <= c <= 6 for c in partition.counts))

    def test_sixty_points_within_one_of_ten(self):
        points = random_point_set(60, np.random.default_rng(60))
        partition = ceder_partition(points)
        self.assertEqual(sum(partition.counts), 60)
        self.assertTrue(all(9 <= c <= 11 for c in partition.counts), partition.counts)

    def test_balanced_apex_splits_the_opposite_half(self):
        points = random_point_set(30, np.random.default_rng(13)).points
        theta = halving_directions(points)[0]
        apexes = halving_line_apexes(points, theta)
        lower = sum(1 for p in points if cross(theta, p) < cross(theta, apexes[0]))
        self.assertEqual(opposite_balance(apexes[0], theta, points)[0], -lower)
        self.assertEqual(opposite_balance(apexes[-1], theta, points)[0], lower)
        window, _ = balanced_crossing(points, theta)
        signs = [opposite_balance(apex, theta, points)[0] for apex in window[:2]]
        self.assertTrue(min(signs) <= 0 <= max(signs), signs)

    def test_opposite_sectors_share_lines(self):
        rays = sector_rays([(1, 0), (1, 1), (-1, 1)])
        for i in range(3):
            self.assertEqual(rays[i + 3], (-rays[i][0], -rays[i][1]))

    def test_ray_points_go_counterclockwise(self):
        rays = sector_rays([(1, 0), (1, 1), (-1, 1)])
        self.assertEqual(assign_sector(ORIGIN, rays, Point.of(5, 0)), 0)
        self.assertEqual(assign_sector(ORIGIN, rays, Point.of(2, 2)), 1)

    def test_too_few_points_rejected(self):
        with self.assertRaises(ValidationProblem):
            ceder_partition(PointSet(tuple(HEXAGON[:5])))


class BukhCheckTests(SimpleTestCase):
    def test_hexagon_contains_fourteen(self):
        self.assertEqual(bukh_check(ORIGIN, HEXAGON, list(range(6))), 14)

    def test_random_one_per_sector_draws(self):
        rng = np.random.default_rng(5)
        points = random_point_set(36, rng)
        partition = ceder_partition(points)
        for _ in range(200):
            six = [points[int(rng.choice(sector))] for sector in partition.sectors]
            self.assertGreaterEqual(bukh_check(partition.apex, six, partition), 8)

    def test_full_enumeration_small_sectors(self):
        points = random_point_set(12, np.random.default_rng(8))
        partition = ceder_partition(points)
        for choice in itertools.product(*partition.sectors):
            six = [points[i] for i in choice]
            self.assertGreaterEqual(bukh_check(partition.apex, six, list(range(6))), 8)

    def test_not_one_per_sector(self):
        with self.assertRaises(ValidationProblem):
            bukh_check(ORIGIN, HEXAGON, [0, 0, 1, 2, 3, 4])

    def test_low_count_is_an_invariant_violation(self):
        six = [Point.of(10 + i, 1 + i * i) for i in range(6)]
        with self.assertRaises(InvariantViolation):
            bukh_check(ORIGIN, six, list(range(6)))


class RadialConeTests(SimpleTestCase):
    def test_equipartition_sizes(self):
        self.assertEqual(equipartition_sizes(10, 4), [3, 3, 2, 2])

    def test_cone_sizes_differ_by_at_most_one(self):
        points = random_point_set(50, np.random.default_rng(1), disk=True)
        partition = radial_homogeneous_partition(points, OFF_CENTRE, 13)
        sizes = [len(b) for b in partition.blocks]
        self.assertLessEqual(max(sizes) - min(sizes), 1)
        self.assertEqual(partition.kind, CONES)

    def test_fraction_bound_for_several_k(self):
        for seed, k in ((2, 13), (4, 25)):
            points = random_point_set(4 * k, np.random.default_rng(seed), disk=True)
            audit = radial_audit(radial_homogeneous_partition(points, OFF_CENTRE, k))
            self.assertLessEqual(audit.nonhomogeneous, audit.count_bound)
            self.assertLessEqual(audit.fraction, audit.fraction_bound)

    def test_fraction_bound_at_121_cones(self):
        points = random_point_set(242, np.random.default_rng(6), disk=True)
        audit = radial_audit(radial_homogeneous_partition(points, OFF_CENTRE, 121))
        self.assertLessEqual(audit.fraction, Fraction(1, 10))

    def test_audit_matches_brute_force(self):
        for seed, size, k in ((9, 24, 8), (10, 30, 6), (11, 40, 10), (12, 27, 9), (13, 36, 7)):
            points = random_point_set(size, np.random.default_rng(seed), disk=seed % 2 == 1)
            partition = radial_homogeneous_partition(points, OFF_CENTRE, k)
            fast = radial_audit(partition)
            brute = homogeneity_audit(partition, OFF_CENTRE, budget=10_000)
            self.assertEqual(brute.unknown, 0)
            self.assertEqual(brute.tuples, fast.triples)
            self.assertEqual(fast.nonhomogeneous, brute.mixed, f"seed={seed} k={k}")

    def test_symmetric_cross(self):
        points = PointSet((Point.of(3, 1), Point.of(-1, 3), Point.of(-3, -1), Point.of(1, -3)))
        partition = radial_homogeneous_partition(points, ORIGIN, 4)
        self.assertEqual(radial_audit(partition).nonhomogeneous, homogeneity_audit(partition, ORIGIN).mixed)

    def test_centre_on_input_point(self):
        with self.assertRaises(ValidationProblem):
            radial_homogeneous_partition(PointSet(tuple(HEXAGON)), HEXAGON[0], 3)


class HomogeneityTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(21)

    def test_surrounding_clusters_all_contain(self):
        sets = [cluster(4, 0, 5, self.rng), cluster(-2, 3, 5, self.rng), cluster(-2, -3, 5, self.rng)]
        result = homogeneity_test(ORIGIN, sets)
        self.assertEqual(result.status, ALL_CONTAIN)
        self.assertTrue(result.homogeneous)

    def test_half_plane_none_contain(self):
        sets = [cluster(3, 1, 4, self.rng), cluster(4, 3, 4, self.rng), cluster(2, 5, 4, self.rng)]
        self.assertEqual(homogeneity_test(ORIGIN, sets).status, NONE_CONTAIN)

    def test_straddling_reflection_is_mixed(self):
        sets = [[Point.of(3, 0)], [Point.of(-3, 1), Point.of(-3, -1)], [Point.of(0, 3), Point.of(0, -3)]]
        self.assertEqual(homogeneity_test(ORIGIN, sets).status, MIXED)

    def test_separation_agrees_with_brute_force(self):
        centres = [(4, 0), (-2, 3), (-2, -3), (3, 1), (4, 3), (2, 5), (-3, 1), (0, -4)]
        for trio in itertools.combinations(centres, 3):
            sets = [cluster(x, y, 6, self.rng, spread=Fraction(1, 2)) for x, y in trio]
            brute = homogeneity_test(ORIGIN, sets, method='brute')
            separated = homogeneity_test(ORIGIN, sets, method='separation')
            if separated.status != UNKNOWN:
                self.assertEqual(separated.status, brute.status)

    def test_singleton_blocks_always_homogeneous(self):
        points = random_point_set(9, np.random.default_rng(4))
        partition = LabeledPartition(points, tuple((i,) for i in range(9)))
        audit = homogeneity_audit(partition, OFF_CENTRE)
        self.assertEqual(audit.tuples, 84)
        self.assertEqual(audit.fraction, 1)

    def test_single_tuple_in_half_plane(self):
        points = PointSet((Point.of(1, 1), Point.of(2, 1), Point.of(3, 2), Point.of(1, 3), Point.of(2, 4), Point.of(4, 1)))
        partition = LabeledPartition(points, ((0, 1), (2, 3), (4, 5)))
        self.assertEqual(homogeneity_audit(partition, ORIGIN).fraction, 1)


class HamSandwichTests(SimpleTestCase):
    def test_compass_points(self):
        points = [Point.of(1, 0), Point.of(0, 1), Point.of(-1, 0), Point.of(0, -1)]
        line = ham_sandwich_line_through(ORIGIN, points)
        sides = [line.side(p) for p in points]
        self.assertLessEqual(sides.count(1), 2)
        self.assertLessEqual(sides.count(-1), 2)

    def test_random_sets_are_halved(self):
        rng = np.random.default_rng(12)
        for size in range(1, 101):
            points = list(random_point_set(size % 17 + 1, rng, disk=True))
            line = ham_sandwich_line_through(OFF_CENTRE, points)
            sides = [line.side(p) for p in points]
            self.assertLessEqual(sides.count(1), len(points) // 2)
            self.assertLessEqual(sides.count(-1), len(points) // 2)

    def test_query_in_set(self):
        with self.assertRaises(ValidationProblem):
            ham_sandwich_line_through(ORIGIN, [ORIGIN, Point.of(1, 1)])


class ExtractionTests(SimpleTestCase):
    def assertSampledAgreement(self, q, subsets, status, samples=2000):
        rng = np.random.default_rng(0)
        expected = status == ALL_CONTAIN
        for _ in range(samples):
            a, b, c = (s[int(rng.integers(len(s)))] for s in subsets)
            self.assertEqual(closed_triangle_contains(q, a, b, c), expected)

    def test_separated_clusters_kept_whole(self):
        rng = np.random.default_rng(2)
        sets = [cluster(4, 0, 10, rng), cluster(-2, 3, 10, rng), cluster(-2, -3, 10, rng)]
        result = extract_homogeneous_subsets(ORIGIN, sets)
        self.assertEqual(result.sizes, (10, 10, 10))
        self.assertTrue(result.status.homogeneous)

    def test_random_sets_of_640(self):
        for seed in range(3):
            points = list(random_point_set(1920, np.random.default_rng(seed), denominator=10 ** 6, disk=True))
            sets = [points[0::3], points[1::3], points[2::3]]
            result = extract_homogeneous_subsets(OFF_CENTRE, sets)
            self.assertTrue(result.status.homogeneous)
            self.assertSampledAgreement(OFF_CENTRE, result.subsets, result.status.status)
            self.assertTrue(all(size >= 2 for size in result.sizes))

    def test_interleaved_rings(self):
        rng = np.random.default_rng(7)
        rings = []
        for radius in (2, 3, 5):
            angles = rng.uniform(0, 2 * np.pi, size=150)
            rings.append([Point.of(Fraction(round(radius * np.cos(a) * 1000), 1000),
                                   Fraction(round(radius * np.sin(a) * 1000), 1000)) for a in angles])
        result = extract_homogeneous_subsets(OFF_CENTRE, rings)
        self.assertTrue(result.status.homogeneous)
        self.assertSampledAgreement(OFF_CENTRE, result.subsets, result.status.status)

    def test_overlapping_sets_rejected(self):
        shared = Point.of(1, 1)
        with self.assertRaises(ValidationProblem):
            extract_homogeneous_subsets(ORIGIN, [[shared], [shared], [Point.of(-1, 0)]])


class PartitionOutputTests(SimpleTestCase):
    def test_labeled_partition_json(self):
        points = random_point_set(12, np.random.default_rng(0), disk=True)
        partition = radial_homogeneous_partition(points, OFF_CENTRE, 4)
        payload = LabeledPartitionSerializer(partition).data
        self.assertEqual(payload['kind'], 'cones')
        serializer = LabeledPartitionSerializer(data=payload, context={'points': points})
        serializer.is_valid(raise_exception=True)
        self.assertEqual(serializer.save().blocks, partition.blocks)

    def test_svg_is_deterministic(self):
        points = random_point_set(12, np.random.default_rng(0))
        partition = ceder_partition(points)
        self.assertEqual(sector_partition_svg(partition), sector_partition_svg(partition))
        cones = radial_homogeneous_partition(points, OFF_CENTRE, 3)
        self.assertTrue(cone_partition_svg(cones).startswith(b'<?xml'))
