import itertools
from fractions import Fraction
from math import comb

from django.test import SimpleTestCase

from overlap_lab.exceptions import ConstructionError, PreconditionError, ValidationProblem

from spectral.analysis import girth

from . import groups
from .constructions import (
    PartitionFamily, cayley_clique_hypergraph, concentration_audit, concentration_counts, density_ratio_audit,
    first_vertices_hypergraph, neighborhood_triple_hypergraph, parts_meet_in_at_most_two, partition_hypergraph,
    random_partition_family, random_partition_parameters, random_regular_hypergraph, walk_hypergraph,
)
from .graphs import (
    complete_graph, cycle_graph, petersen_graph, projective_plane_incidence, random_girth5_graph,
    random_regular_graph,
)
from .serializers import HypergraphSerializer, hypergraph_csv
from .structures import (
    Graph, Hypergraph, block_density, complete_hypergraph, crossing_edges, degree_profile, edge_density,
    isomorphic,
)


class HypergraphTests(SimpleTestCase):
    def test_edges_are_normalized(self):
        hypergraph = Hypergraph(4, 3, ((2, 1, 0), (0, 1, 2), (3, 1, 0)))
        self.assertEqual(hypergraph.edges, ((0, 1, 2), (0, 1, 3)))
        self.assertEqual(len(hypergraph), 2)

    def test_invalid_edges(self):
        with self.assertRaises(ConstructionError):
            Hypergraph(3, 3, ((0, 1, 3),))
        with self.assertRaises(ConstructionError):
            Hypergraph(3, 3, ((0, 1, 1),))

    def test_degree_and_density(self):
        hypergraph = complete_hypergraph(6, 3)
        self.assertEqual(degree_profile(hypergraph).degrees, (10,) * 6)
        self.assertTrue(degree_profile(hypergraph).is_regular)
        self.assertEqual(edge_density(hypergraph), 1)

    def test_crossing_edges(self):
        hypergraph = complete_hypergraph(6, 3)
        blocks = [{0, 1}, {2, 3}, {4, 5}]
        self.assertEqual(len(crossing_edges(hypergraph, blocks)), 8)
        self.assertEqual(block_density(hypergraph, blocks), 1)
        with self.assertRaises(ValidationProblem):
            crossing_edges(hypergraph, [{0, 1}, {1, 2}, {3}])
        with self.assertRaises(ValidationProblem):
            crossing_edges(hypergraph, [{0, 1}, {2}])

    def test_isomorphism_survives_relabelling(self):
        hypergraph = walk_hypergraph(petersen_graph(), 2)
        mapping = [3, 7, 1, 0, 9, 2, 8, 6, 4, 5]
        self.assertTrue(isomorphic(hypergraph, hypergraph.relabeled(mapping)))
        self.assertFalse(isomorphic(hypergraph, complete_hypergraph(10, 3)))


class ConstructionTests(SimpleTestCase):
    def test_petersen_neighbourhoods(self):
        hypergraph = neighborhood_triple_hypergraph(petersen_graph())
        self.assertEqual(len(hypergraph.edges), 10)
        self.assertEqual(degree_profile(hypergraph).degrees, (3,) * 10)

    def test_neighbourhoods_need_a_quadrilateral_free_regular_graph(self):
        with self.assertRaises(ConstructionError):
            neighborhood_triple_hypergraph(cycle_graph(4))
        with self.assertRaises(ConstructionError):
            neighborhood_triple_hypergraph(Graph(4, ((0, 1), (1, 2), (2, 3))))

    def test_projective_plane_neighbourhoods(self):
        hypergraph = neighborhood_triple_hypergraph(projective_plane_incidence(3))
        self.assertEqual(len(hypergraph.edges), 26 * comb(4, 3))
        self.assertEqual(set(degree_profile(hypergraph).degrees), {4 * comb(3, 2)})

    def test_walks(self):
        self.assertEqual(len(walk_hypergraph(cycle_graph(6), 2).edges), 6)
        # girth 5: every 2-step walk spans a distinct triple
        self.assertEqual(len(walk_hypergraph(petersen_graph(), 2).edges), 30)
        with self.assertRaises(PreconditionError):
            walk_hypergraph(cycle_graph(6), 3)

    def test_cayley_cliques(self):
        connection = groups.cyclic_elements(5, [1, -1, 2, -2])
        hypergraph = cayley_clique_hypergraph([groups.cyclic_generator(5)], connection, 3)
        self.assertEqual(len(hypergraph.edges), 10)
        triangle_free = cayley_clique_hypergraph([groups.cyclic_generator(6)],
                                                 groups.cyclic_elements(6, [1, -1]), 3)
        self.assertEqual(triangle_free.edges, ())

    def test_cayley_connection_set_checks(self):
        generator = [groups.cyclic_generator(5)]
        with self.assertRaises(ValidationProblem):
            cayley_clique_hypergraph(generator, groups.cyclic_elements(5, [1]), 3)
        with self.assertRaises(ValidationProblem):
            cayley_clique_hypergraph(generator, groups.cyclic_elements(5, [0, 1, -1]), 3)
        with self.assertRaises(ValidationProblem):
            cayley_clique_hypergraph(generator, groups.cyclic_elements(5, [1, -1]), 1)

    def test_symmetric_group_cliques(self):
        elements = groups.closure(groups.symmetric_generators(3))
        connection = [g for g in elements if g != groups.identity(3)]
        hypergraph = cayley_clique_hypergraph(groups.symmetric_generators(3), connection, 3)
        self.assertEqual(len(hypergraph.edges), comb(6, 3))

    def test_cayley_cliques_are_invariant_under_translation(self):
        generators = groups.symmetric_generators(4)
        elements = groups.closure(generators)
        index = {g: i for i, g in enumerate(elements)}
        three_cycles = [g for g in elements if sum(g[i] == i for i in range(4)) == 1]
        hypergraph = cayley_clique_hypergraph(generators, three_cycles, 3)
        self.assertTrue(hypergraph.edges)
        edges = set(hypergraph.edges)
        for x in elements:
            for translate in (lambda g: groups.compose(g, x), lambda g: groups.compose(x, g)):
                moved = {tuple(sorted(index[translate(elements[v])] for v in e)) for e in edges}
                self.assertEqual(moved, edges)

    def test_cayley_cliques_follow_right_translation(self):
        # g ~ h iff g h^-1 lies in S, so translating on the right is always an automorphism
        generators = groups.symmetric_generators(3)
        swap, cycle = generators
        connection = [swap, cycle, groups.inverse(cycle)]
        elements = groups.closure(generators)
        index = {g: i for i, g in enumerate(elements)}
        hypergraph = cayley_clique_hypergraph(generators, connection, 3)
        self.assertEqual(len(hypergraph.edges), 2)
        for x in elements:
            moved = {tuple(sorted(index[groups.compose(elements[v], x)] for v in e)) for e in hypergraph.edges}
            self.assertEqual(moved, set(hypergraph.edges))

    def test_small_regular_hypergraph_is_complete(self):
        hypergraph = random_regular_hypergraph(4, 3, 3, seed=5)
        self.assertEqual(hypergraph, complete_hypergraph(4, 3))

    def test_random_regular_hypergraph(self):
        hypergraph = random_regular_hypergraph(12, 3, 4, seed=9)
        self.assertEqual(degree_profile(hypergraph).degrees, (4,) * 12)
        self.assertEqual(len(hypergraph.edges), 16)
        self.assertEqual(hypergraph, random_regular_hypergraph(12, 3, 4, seed=9))
        with self.assertRaises(ValidationProblem):
            random_regular_hypergraph(10, 3, 4, seed=1)
        with self.assertRaises(ValidationProblem):
            random_regular_hypergraph(4, 3, 4, seed=1)

    def test_partition_family(self):
        family = random_partition_family(12, 3, 2, seed=3)
        self.assertTrue(parts_meet_in_at_most_two(family))
        hypergraph = partition_hypergraph(family)
        self.assertEqual(degree_profile(hypergraph).degrees, (2,) * 12)
        self.assertEqual(sum(concentration_counts(family, range(12), Fraction(1, 10))), 0)
        with self.assertRaises(ValidationProblem):
            random_partition_family(10, 3, 2, seed=3)

    def test_partition_parameters(self):
        params = random_partition_parameters(0.5)
        self.assertEqual(params['b'], 8)
        self.assertLess(params['beta'], 1)
        with self.assertRaises(ValidationProblem):
            random_partition_parameters(1.5)

    def test_first_vertices(self):
        hypergraph = first_vertices_hypergraph(5, 2)
        self.assertEqual(hypergraph.edges, ((0, 1, 2), (0, 1, 3), (0, 1, 4)))
        with self.assertRaises(ValidationProblem):
            first_vertices_hypergraph(2, 2)

    def test_complete_hypergraph_has_uniform_density(self):
        audit = density_ratio_audit(complete_hypergraph(9, 3), epsilon=0.1, k=3, trials=5, seed=2)
        self.assertEqual(audit['violations'], 0)
        self.assertEqual(audit['block_size'], 3)

    def test_concentration_threshold_is_exact(self):
        family = PartitionFamily(20, 10, ((tuple(range(10)), tuple(range(10, 20))),))
        # (4/20 + 1/10) * 10 = 3 exactly; a float threshold lands just above 3
        self.assertEqual(concentration_counts(family, [0, 1, 2, 10], Fraction(1, 10)), [1])
        self.assertEqual(concentration_counts(family, [0, 1, 2, 10], 0.1), [1])
        self.assertEqual(concentration_counts(family, [0, 1, 10, 11], Fraction(1, 10)), [0])

    def test_concentration_audit(self):
        halves = (tuple(range(10)), tuple(range(10, 20)))
        evens = (tuple(range(0, 20, 2)), tuple(range(1, 20, 2)))
        family = PartitionFamily(20, 10, (halves, evens))
        self.assertEqual(concentration_counts(family, range(10), Fraction(1, 2)), [1, 0])
        self.assertEqual(concentration_audit(family, range(10), Fraction(1, 2)), 1)
        self.assertEqual(concentration_audit(family, [], Fraction(1, 2)), 0)
        # beta n / b exceeds the single overloaded part when delta is small
        self.assertEqual(concentration_audit(family, range(10), Fraction(1, 10)), 0)

    def test_density_ratio_audit_flags_a_lopsided_hypergraph(self):
        lopsided = Hypergraph(12, 3, tuple(itertools.combinations(range(6), 3)))
        audit = density_ratio_audit(lopsided, epsilon=0.4, k=4, trials=40, seed=3)
        self.assertEqual(audit['trials'], 40)
        self.assertEqual(len(audit['ratios']), 40)
        self.assertGreater(audit['violations'], 0)
        self.assertEqual(audit['violation_rate'], audit['violations'] / 40)
        with self.assertRaises(ValidationProblem):
            density_ratio_audit(lopsided, epsilon=0.4, k=2, trials=1, seed=3)


class GraphTests(SimpleTestCase):
    def test_projective_plane(self):
        graph = projective_plane_incidence(2)
        self.assertEqual(graph.n, 14)
        self.assertEqual(graph.regular_degree, 3)
        self.assertEqual(len(graph.edges), 21)
        self.assertEqual(girth(graph), 6)
        with self.assertRaises(ValidationProblem):
            projective_plane_incidence(4)

    def test_random_regular_graph(self):
        graph = random_regular_graph(16, 3, seed=4)
        self.assertEqual(graph.regular_degree, 3)
        with self.assertRaises(ConstructionError):
            random_regular_graph(7, 3, seed=4)

    def test_girth_five_repair(self):
        graph = random_girth5_graph(30, 3, seed=6)
        self.assertEqual(graph.regular_degree, 3)
        self.assertGreaterEqual(girth(graph), 5)

    def test_graph_validation(self):
        with self.assertRaises(ConstructionError):
            Graph(3, ((0, 0),))
        with self.assertRaises(ConstructionError):
            Graph(3, ((0, 3),))
        self.assertEqual(complete_graph(4).to_networkx().number_of_edges(), 6)


class GroupTests(SimpleTestCase):
    def test_closure(self):
        self.assertEqual(len(groups.closure([groups.cyclic_generator(5)])), 5)
        self.assertEqual(len(groups.closure(groups.symmetric_generators(4))), 24)

    def test_inverse_and_power(self):
        g = groups.cyclic_generator(7)
        self.assertEqual(groups.compose(g, groups.inverse(g)), groups.identity(7))
        self.assertEqual(groups.power(g, 7), groups.identity(7))
        self.assertEqual(groups.power(g, -1), groups.inverse(g))

    def test_not_a_permutation(self):
        with self.assertRaises(ValidationProblem):
            groups.closure([(0, 0, 1)])


class HypergraphSerializerTests(SimpleTestCase):
    def test_payload_is_read_back(self):
        hypergraph = neighborhood_triple_hypergraph(petersen_graph())
        serializer = HypergraphSerializer(data=HypergraphSerializer(hypergraph).data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), hypergraph)

    def test_out_of_range_vertex(self):
        serializer = HypergraphSerializer(data={'n': 3, 'arity': 3, 'edges': [[0, 1, 5]]})
        self.assertFalse(serializer.is_valid())

    def test_csv(self):
        text = hypergraph_csv(first_vertices_hypergraph(4, 2))
        self.assertEqual(text, "v0,v1,v2\n0,1,2\n0,1,3\n")
