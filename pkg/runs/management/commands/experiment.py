import csv
import io
from fractions import Fraction

import numpy as np

from overlap_lab.conf import lab_setting
from overlap_lab.exceptions import ValidationProblem

from experiments.config import ExperimentConfig
from experiments.embeddings import adversarial_embedding, bijection_study
from experiments.estimates import TrendRow, estimate_c_complete, point_duplication_check
from experiments.pipeline import expander_overlap_pipeline
from experiments.serializers import (
    AdversarialResultSerializer, BijectionStudySerializer, DuplicationCheckSerializer, ExpanderReportSerializer,
    OverlapEstimateSerializer, trend_csv,
)
from geometry.points import random_point_set
from hypergraphs.constructions import random_regular_hypergraph
from hypergraphs.structures import complete_hypergraph
from partitions.plotting import embedding_svg

from runs.base import LabCommand, RunOutput


def bijection_csv(study):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['trial', 'covered', 'fraction'])
    for i, count in enumerate(study.counts):
        writer.writerow([i, count, str(Fraction(count, study.edges))])
    return buffer.getvalue()


class Command(LabCommand):
    help = 'Overlap experiments: random bijections, annealing, c(K_n^3) trend, expander pipeline, duplication'
    name = 'experiment'
    actions = ('bijection', 'anneal', 'ctrend', 'expander', 'duplicate')
    formats = {'bijection': ('json', 'csv'), 'anneal': ('json', 'svg'), 'ctrend': ('json', 'csv'),
               'expander': ('json',), 'duplicate': ('json',)}

    def add_command_arguments(self, parser):
        self.add_graph_arguments(parser)
        parser.add_argument('--hypergraph', help='Hipergrafo em JSON')
        parser.add_argument('--points', help='Pontos em CSV (x,y) ou JSON')
        parser.add_argument('--complete', type=int, help='Usa o hipergrafo completo K_n^3 (anneal)')
        parser.add_argument('--r', type=int, help='Grau do hipergrafo regular aleatório (bijection)')
        parser.add_argument('--ns', help="Lista de n para a tendência, ex.: '3,4,5' (ctrend; --n para um só)")
        parser.add_argument('--m', type=int, default=2, help='Tamanho dos aglomerados (duplicate)')
        parser.add_argument('--delta', type=Fraction, default=Fraction(1, 2), help='Folga do conjunto A (expander)')
        parser.add_argument('--chains', type=int, help='Cadeias de recozimento')
        parser.add_argument('--steps', type=int, help='Passos por cadeia')
        parser.add_argument('--initial-temperature', type=float, help='Temperatura inicial')
        parser.add_argument('--cooling', type=float, help='Fator de resfriamento em (0, 1)')
        parser.add_argument('--step-scale', type=float, help='Desvio padrão das propostas')
        parser.add_argument('--exact-limit', type=int, help='Maior n avaliado exatamente (expander)')

    def config(self, options):
        return ExperimentConfig.from_options(**options)

    def run(self, action, options):
        return getattr(self, f'run_{action}')(options)

    def hypergraph(self, options):
        if options['hypergraph']:
            return self.read_hypergraph(options['hypergraph'])
        if options['complete']:
            return complete_hypergraph(options['complete'], 3)
        if options['n'] and options['r']:
            return random_regular_hypergraph(options['n'], 3, options['r'], options['seed'])
        raise ValidationProblem("give --hypergraph, --complete N, or --n with --r")

    def run_bijection(self, options):
        hypergraph = self.hypergraph(options)
        if options['points']:
            points = self.read_points(options['points'])
        else:
            points = random_point_set(hypergraph.n, np.random.default_rng(options['seed']),
                                      denominator=lab_setting('SNAP_DENOMINATOR'))
        cfg = self.config(options)
        study = bijection_study(hypergraph, points, cfg.seed, cfg.trials, threads=cfg.threads,
                                use_async=options['use_async'])
        return RunOutput(
            payload=BijectionStudySerializer(study).data,
            summary=f"{study.trials} bijections: mean {float(study.mean):.4f}, p95 {float(study.p95):.4f}, "
                    f"max {float(study.maximum):.4f}",
            details=[f"📍 Deep point of the point set: {float(study.deep_fraction):.4f}"],
            csv=lambda: bijection_csv(study),
        )

    def run_anneal(self, options):
        hypergraph = self.hypergraph(options)
        result = adversarial_embedding(hypergraph, self.config(options), use_async=options['use_async'])
        return RunOutput(
            payload=AdversarialResultSerializer(result).data,
            summary=f"Best embedding overlap {result.covered}/{result.total} = {result.fraction} "
                    f"(chain {result.chain})",
            svg=lambda: embedding_svg(result.embedding, result.witness, hypergraph.edges),
        )

    def run_ctrend(self, options):
        if options['ns']:
            ns = [int(v) for v in options['ns'].split(',')]
        elif options['n']:
            ns = [options['n']]
        else:
            raise ValidationProblem("experiment ctrend needs --n or --ns")
        cfg = self.config(options)
        estimates = [estimate_c_complete(n, options['d'], cfg) for n in ns]
        rows = [TrendRow(e.n, e.upper, e.upper_method, e.witness_family) for e in estimates]
        return RunOutput(
            payload={'estimates': OverlapEstimateSerializer(estimates, many=True).data},
            summary='; '.join(f"c(K_{e.n}^3) <= {e.upper}" for e in estimates),
            csv=lambda: trend_csv(rows),
        )

    def run_expander(self, options):
        report = expander_overlap_pipeline(self.load_graph(options), self.config(options), options['delta'])
        vacuous = all(a.core_bound_vacuous for a in report.embeddings)
        return RunOutput(
            payload=ExpanderReportSerializer(report).data,
            summary=f"Minimum overlap {float(report.minimum):.4f} over {len(report.embeddings)} embeddings "
                    f"(lambda={report.lam:.4f})",
            details=[f"📊 Core-size bound {'vacuous' if vacuous else 'active'}"],
        )

    def run_duplicate(self, options):
        if not options['points']:
            raise ValidationProblem("experiment duplicate needs --points")
        check = point_duplication_check(self.read_points(options['points']), options['m'])
        return RunOutput(
            payload=DuplicationCheckSerializer(check).data,
            summary=f"Deep-point fraction {check.before} -> {check.after} "
                    f"(degenerate share {check.degenerate}, {'passed' if check.passed else 'failed'})",
        )
