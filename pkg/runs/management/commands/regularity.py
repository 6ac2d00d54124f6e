from fractions import Fraction

from overlap_lab.exceptions import ValidationProblem

from partitions.serializers import HomogeneityAuditSerializer, LabeledPartitionSerializer
from regularity.cover import geometric_hypergraph, homogeneous_cover, homogeneous_partition
from regularity.density import find_superregular
from regularity.serializers import CoverResultSerializer, SuperregularResultSerializer, history_csv

from runs.base import LabCommand, RunOutput, parse_point


class Command(LabCommand):
    help = 'Superregular tuples, homogeneous covers and equal-size homogeneous partitions'
    name = 'regularity'
    actions = ('run', 'cover', 'partition')
    formats = {'run': ('json', 'csv'), 'cover': ('json',), 'partition': ('json',)}

    def add_command_arguments(self, parser):
        parser.add_argument('--hypergraph', help='Hipergrafo em JSON (run)')
        parser.add_argument('--points', help='Pontos em CSV (x,y) ou JSON')
        parser.add_argument('--q', help="Ponto central 'x,y'; com --points define o hipergrafo H_q")
        parser.add_argument('--gamma', type=Fraction, default=Fraction(1, 2), help="Ex.: '1/2'")
        parser.add_argument('--delta', type=Fraction, default=Fraction(1, 16), help="Ex.: '1/16'")
        parser.add_argument('--witness-budget', type=int, help='Testemunhas amostradas por iteração')

    def geometric_input(self, options):
        if not (options['points'] and options['q']):
            raise ValidationProblem("this action needs --points and --q")
        return self.read_points(options['points']), parse_point(options['q'])

    def run(self, action, options):
        return getattr(self, f'run_{action}')(options)

    def run_run(self, options):
        if options['hypergraph']:
            hypergraph = self.read_hypergraph(options['hypergraph'])
        else:
            hypergraph = geometric_hypergraph(*self.geometric_input(options))
        result = find_superregular(hypergraph, options['gamma'], options['delta'],
                                   witness_budget=options['witness_budget'], seed=options['seed'])
        inconclusive = None
        if not result.verified:
            inconclusive = f"superregularity is {result.status}: no witness among {result.witnesses_tried} sampled"
        return RunOutput(
            payload=SuperregularResultSerializer(result).data,
            summary=f"Blocks of sizes {result.state.sizes} with density {result.density} "
                    f"after {result.state.iteration} increments ({result.status})",
            csv=lambda: history_csv(result.state),
            inconclusive=inconclusive,
        )

    def run_cover(self, options):
        points, q = self.geometric_input(options)
        epsilon = options['epsilon'] if options['epsilon'] is not None else 0.1
        cover = homogeneous_cover(points, q, Fraction(str(epsilon)), seed=options['seed'])
        return RunOutput(
            payload=CoverResultSerializer(cover).data,
            summary=f"{len(cover.tuples)} homogeneous tuples cover {cover.covered} of {cover.total} triples",
        )

    def run_partition(self, options):
        points, q = self.geometric_input(options)
        if not options['k']:
            raise ValidationProblem("regularity partition needs --k")
        epsilon = options['epsilon'] if options['epsilon'] is not None else 0.1
        result = homogeneous_partition(points, q, options['k'], Fraction(str(epsilon)), seed=options['seed'])
        return RunOutput(
            payload={'partition': LabeledPartitionSerializer(result.partition).data,
                     'audit': HomogeneityAuditSerializer(result.audit).data,
                     'classes': result.classes,
                     'cover_tuples': len(result.cover.tuples)},
            summary=f"{options['k']} blocks, non-homogeneous fraction {result.audit.nonhomogeneous_fraction}",
        )
