from overlap_lab.exceptions import ValidationProblem

from hypergraphs import groups
from hypergraphs.constructions import (
    cayley_clique_hypergraph, neighborhood_triple_hypergraph, partition_hypergraph, random_partition_family,
    random_regular_hypergraph, walk_hypergraph,
)
from hypergraphs.serializers import HypergraphSerializer, hypergraph_csv
from hypergraphs.structures import degree_profile

from runs.base import LabCommand, RunOutput


def parse_integers(text):
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError as exc:
        raise ValidationProblem(f"not a list of integers: {text!r}") from exc


def parse_permutations(text):
    """'1,0,2;1,2,0' -> [(1, 0, 2), (1, 2, 0)]; each entry is the image list of one permutation."""
    perms = [tuple(parse_integers(chunk)) for chunk in text.split(';') if chunk.strip()]
    if not perms:
        raise ValidationProblem("at least one permutation is required")
    return perms


class Command(LabCommand):
    help = 'Build a hypergraph: partition, neighborhood, walk, cayley or regular'
    name = 'construct'
    actions = ('partition', 'neighborhood', 'walk', 'cayley', 'regular')
    formats = {action: ('json', 'csv') for action in actions}

    def add_command_arguments(self, parser):
        self.add_graph_arguments(parser)
        parser.add_argument('--b', type=int, help='Tamanho das partes (partition)')
        parser.add_argument('--t', type=int, help='Número de partições (partition)')
        parser.add_argument('--r', type=int, help='Grau (regular) ou tamanho do clique (cayley)')
        parser.add_argument('--order', type=int, help='Ordem do grupo cíclico (cayley)')
        parser.add_argument('--generators', help="Geradores como imagens de permutações, ex.: '1,0,2;1,2,0' (cayley)")
        parser.add_argument('--connection',
                            help="Conjunto de conexão: resíduos '1,4' com --order ou permutações '1,0,2;0,2,1' com --generators")

    def run(self, action, options):
        arity = options['d'] + 1
        if action == 'partition':
            if not (options['n'] and options['b'] and options['t']):
                raise ValidationProblem("construct partition needs --n, --b and --t")
            family = random_partition_family(options['n'], options['b'], options['t'], options['seed'])
            hypergraph = partition_hypergraph(family, arity)
        elif action == 'neighborhood':
            hypergraph = neighborhood_triple_hypergraph(self.load_graph(options))
        elif action == 'walk':
            hypergraph = walk_hypergraph(self.load_graph(options), options['d'])
        elif action == 'cayley':
            if not (options['connection'] and options['r']) or not (options['order'] or options['generators']):
                raise ValidationProblem("construct cayley needs --connection, --r and --order or --generators")
            if options['generators']:
                generators = parse_permutations(options['generators'])
                connection = parse_permutations(options['connection'])
            else:
                order = options['order']
                generators = [groups.cyclic_generator(order)]
                connection = groups.cyclic_elements(order, parse_integers(options['connection']))
            hypergraph = cayley_clique_hypergraph(generators, connection, options['r'])
        else:
            if not (options['n'] and options['r']):
                raise ValidationProblem("construct regular needs --n and --r")
            hypergraph = random_regular_hypergraph(options['n'], arity, options['r'], options['seed'])

        profile = degree_profile(hypergraph)
        return RunOutput(
            payload=HypergraphSerializer(hypergraph).data,
            summary=f"{action} hypergraph with {len(hypergraph.edges)} hyperedges on {hypergraph.n} vertices",
            details=[f"📊 Degrees: min {profile.minimum}, max {profile.maximum}"],
            csv=lambda: hypergraph_csv(hypergraph),
        )
