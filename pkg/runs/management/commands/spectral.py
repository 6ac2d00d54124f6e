import csv
import io
import math

import numpy as np

from overlap_lab.exceptions import InvariantViolation

from spectral.analysis import adjacency_spectrum, girth, is_quadrilateral_free, is_ramanujan, verify_mixing
from spectral.serializers import MixingCheckSerializer, SpectralReportSerializer

from runs.base import LabCommand, RunOutput


def eigenvalue_csv(report):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['index', 'eigenvalue'])
    for i, value in enumerate(report.eigenvalues):
        writer.writerow([i, repr(float(value))])
    return buffer.getvalue()


class Command(LabCommand):
    help = 'Spectrum, girth, quadrilateral-freeness and mixing-lemma checks of a graph'
    name = 'spectral'
    formats = {'': ('json', 'csv')}

    def add_command_arguments(self, parser):
        self.add_graph_arguments(parser)
        parser.add_argument('--pairs', type=int, default=0, help='Pares (S, T) aleatórios para o lema de mistura')

    def run(self, action, options):
        graph = self.load_graph(options)
        report = adjacency_spectrum(graph)
        rng = np.random.default_rng(options['seed'])
        checks = []
        if options['pairs'] and report.regular:
            for _ in range(options['pairs']):
                first = np.flatnonzero(rng.random(graph.n) < rng.random())
                second = np.flatnonzero(rng.random(graph.n) < rng.random())
                check = verify_mixing(graph, first.tolist(), second.tolist(), report)
                if not check.holds:
                    raise InvariantViolation(f"mixing lemma fails for |S|={len(first)}, |T|={len(second)}")
                checks.append(check)
        shortest = girth(graph)
        payload = {
            'spectrum': SpectralReportSerializer(report).data,
            'quadrilateral_free': is_quadrilateral_free(graph),
            'girth': None if math.isinf(shortest) else shortest,
            'mixing': MixingCheckSerializer(checks, many=True).data,
        }
        return RunOutput(
            payload=payload,
            summary=f"n={report.n}, k={report.k}, lambda={report.lam:.6f} "
                    f"(Ramanujan: {'yes' if is_ramanujan(report) else 'no'})",
            details=[f"🔁 Girth: {payload['girth']}", f"📊 Mixing pairs checked: {len(checks)}"],
            csv=lambda: eigenvalue_csv(report),
        )
