import numpy as np

from geometry.overlap import METHODS, overlap_value
from geometry.serializers import OverlapReportSerializer
from partitions.plotting import embedding_svg

from runs.base import LabCommand, RunOutput


class Command(LabCommand):
    help = 'Evaluate the overlap of a hypergraph under a given embedding'
    name = 'overlap'
    actions = ('eval',)
    formats = {'eval': ('json', 'svg')}

    def add_command_arguments(self, parser):
        parser.add_argument('--hypergraph', required=True, help='Hipergrafo em JSON')
        parser.add_argument('--points', required=True, help='Imersão: pontos em CSV (x,y) ou JSON; ponto i = vértice i')
        parser.add_argument('--method', choices=METHODS, default='auto', help='Método de avaliação')
        parser.add_argument('--samples', type=int, help='Amostras do método monte-carlo')
        parser.add_argument('--grid-size', type=int, help='Lado da grade do método grid')

    def run(self, action, options):
        hypergraph = self.read_hypergraph(options['hypergraph'])
        points = self.read_points(options['points'])
        report = overlap_value(hypergraph, points, method=options['method'],
                               rng=np.random.default_rng(options['seed']),
                               samples=options['samples'], grid_size=options['grid_size'])
        kind = 'lower estimate' if report.lower_bound else 'exact'
        return RunOutput(
            payload=OverlapReportSerializer(report).data,
            summary=f"Overlap {report.covered}/{report.total} = {report.fraction} ({kind}, {report.provenance})",
            details=[f"📍 Witness: {report.witness}"],
            svg=lambda: embedding_svg(points, report.witness, hypergraph.edges),
        )
