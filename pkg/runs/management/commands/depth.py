from geometry.depth import depth_report
from geometry.overlap import deep_point_complete
from geometry.serializers import DepthReportSerializer, OverlapReportSerializer
from partitions.plotting import embedding_svg

from runs.base import LabCommand, RunOutput, parse_point


class Command(LabCommand):
    help = 'Simplicial depth of a query point, or the deepest point of a point set'
    name = 'depth'
    formats = {'': ('json', 'svg')}

    def add_command_arguments(self, parser):
        parser.add_argument('--points', required=True, help='Pontos em CSV (x,y) ou JSON')
        parser.add_argument('--query', help="Ponto de consulta 'x,y'; sem ele, calcula o ponto mais profundo")

    def run(self, action, options):
        points = self.read_points(options['points'])
        if options['query']:
            q = parse_point(options['query'])
            report = depth_report(q, points.points)
            return RunOutput(
                payload=DepthReportSerializer(report).data,
                summary=f"Depth of {q}: {report.count}/{report.total} triangles ({report.method})",
                svg=lambda: embedding_svg(points, q),
            )
        report = deep_point_complete(points)
        return RunOutput(
            payload=OverlapReportSerializer(report).data,
            summary=f"Deep point {report.witness} in {report.covered}/{report.total} triangles = {report.fraction}",
            svg=lambda: embedding_svg(points, report.witness),
        )
