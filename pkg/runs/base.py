"""Shared plumbing of the lab commands: global flags, input digests, output files and manifests."""
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from django.core.management.base import BaseCommand

from overlap_lab import __version__
from overlap_lab.conf import lab_setting
from overlap_lab.exceptions import InconclusiveResult, ValidationProblem

from geometry.points import Point
from geometry.serializers import parse_json, read_point_set, render_json
from hypergraphs.graphs import (
    cycle_graph, petersen_graph, projective_plane_incidence, random_girth5_graph, random_regular_graph,
)
from hypergraphs.serializers import GraphSerializer, HypergraphSerializer

from .manifest import record_run, sha256_bytes, sha256_file, write_manifest

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv', 'svg')
# Django's own options, left out of manifests
DJANGO_OPTIONS = {'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color',
                  'skip_checks', 'stdout', 'stderr'}
NAMED_GRAPHS = ('petersen', 'cycle', 'projective', 'regular', 'girth5')


@dataclass
class RunOutput:
    """Result of one command run; ``csv`` and ``svg`` are rendered lazily."""

    payload: dict
    summary: str
    details: list = field(default_factory=list)
    csv: object = None
    svg: object = None
    inconclusive: str = None

    def render(self, fmt):
        if fmt == 'json':
            return render_json(self.payload)
        renderer = getattr(self, fmt)
        if renderer is None:
            return None
        return renderer().encode('utf-8')


def parse_point(text):
    """'x,y' with exact rationals such as '1/2,3'."""
    try:
        return Point(tuple(part.strip() for part in text.split(',')))
    except ValidationProblem as e:
        raise ValidationProblem(f"not a point: {text!r} ({e})") from e


class LabCommand(BaseCommand):
    name = ''
    actions = ()
    formats = {}

    def add_arguments(self, parser):
        if self.actions:
            parser.add_argument('action', choices=self.actions)
        parser.add_argument('--seed', type=int, default=None, help='Semente (inteiro de 64 bits)')
        parser.add_argument('--out', default=None, help="Arquivo de saída; '-' escreve na saída padrão")
        parser.add_argument('--format', choices=FORMATS, default='json', help='Formato da saída')
        parser.add_argument('--d', type=int, default=2, help='Dimensão')
        parser.add_argument('--epsilon', type=float, default=None)
        parser.add_argument('--k', type=int, default=None)
        parser.add_argument('--trials', type=int, default=None)
        parser.add_argument('--threads', type=int, default=1, help='Número máximo de tarefas paralelas')
        parser.add_argument('--async', action='store_true', dest='use_async',
                            help='Despacha tentativas e cadeias pelo Celery')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run(self, action, options):
        raise NotImplementedError

    # Inputs

    def input_path(self, path):
        path = Path(path)
        if not path.exists():
            raise ValidationProblem(f"input file {path} does not exist")
        self.input_digests[str(path)] = sha256_file(path)
        return path

    def read_points(self, path):
        return read_point_set(self.input_path(path))

    def read_json(self, path):
        return parse_json(self.input_path(path).read_bytes())

    def read_hypergraph(self, path):
        serializer = HypergraphSerializer(data=self.read_json(path))
        serializer.is_valid(raise_exception=True)
        return serializer.save()

    def load_graph(self, options):
        """Graph from --graph FILE or a --named family (with --n, --q, --k and --seed)."""
        if options.get('graph'):
            serializer = GraphSerializer(data=self.read_json(options['graph']))
            serializer.is_valid(raise_exception=True)
            return serializer.save()
        named = options.get('named') or 'petersen'
        if named == 'petersen':
            return petersen_graph()
        if named == 'projective':
            return projective_plane_incidence(options.get('q') or 2)
        n = options.get('n')
        if not n:
            raise ValidationProblem(f"--named {named} needs --n")
        if named == 'cycle':
            return cycle_graph(n)
        k = options.get('k') or 3
        if named == 'regular':
            return random_regular_graph(n, k, options['seed'])
        return random_girth5_graph(n, k, options['seed'])

    def add_graph_arguments(self, parser):
        parser.add_argument('--graph', help='Grafo em JSON ({"n": N, "edges": [[u, v], ...]})')
        parser.add_argument('--named', choices=NAMED_GRAPHS, help='Família de grafos nomeada')
        parser.add_argument('--n', type=int, help='Número de vértices')
        parser.add_argument('--q', type=int, help='Ordem do corpo do plano projetivo')

    # Run

    def handle(self, *args, **options):
        started = time.perf_counter()
        self.input_digests = {}
        if options['seed'] is None:
            options['seed'] = lab_setting('DEFAULT_SEED')
        action = options.get('action') or ''
        label = f"{self.name} {action}".strip()
        fmt = options['format']
        allowed = self.formats.get(action, ('json',))
        if fmt not in allowed:
            raise ValidationProblem(f"'{label}' writes {', '.join(allowed)}, not {fmt}")

        out = options['out']
        # progress goes to stderr when the payload itself is written to stdout
        notes = self.stderr if out == '-' else self.stdout
        notes.write(f"Starting {label}...")
        output = self.run(action, options)
        data = output.render(fmt)

        if out == '-':
            self.stdout.write(data.decode('utf-8'), ending='')
        else:
            path = Path(out) if out else self.default_output(action, fmt)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
            record = self.manifest_record(action, options, path, fmt, data, time.perf_counter() - started,
                                          3 if output.inconclusive else 0)
            manifest, record = write_manifest(record, path)
            record_run(record)
            logger.info(f"{label} wrote {path} and {manifest}")
            notes.write(f"📁 Output: {path}")

        notes.write(self.style.SUCCESS(f"✅ {output.summary}"))
        for line in output.details:
            notes.write(line)
        if output.inconclusive:
            notes.write(self.style.ERROR(f"❌ {output.inconclusive}"))
            raise InconclusiveResult(output.inconclusive, result=output.payload)

    def default_output(self, action, fmt):
        stem = f"{self.name}-{action}" if action else self.name
        return Path(lab_setting('OUTPUT_DIR')) / f"{stem}.{fmt}"

    def manifest_record(self, action, options, path, fmt, data, wall_clock, exit_code):
        parameters = {k: str(v) if isinstance(v, Fraction) else v for k, v in options.items()
                      if k not in DJANGO_OPTIONS and k != 'action'}
        argv = [self.name] + ([action] if action else [])
        for key, value in sorted(parameters.items()):
            if value is None or value is False:
                continue
            flag = '--async' if key == 'use_async' else f"--{key.replace('_', '-')}"
            argv.append(flag if value is True else f"{flag}={value}")
        return {
            'command': self.name,
            'action': action,
            'argv': argv,
            'parameters': parameters,
            'seed': str(options['seed']),
            'input_digests': dict(self.input_digests),
            'outputs': [{'path': str(path), 'format': fmt, 'sha256': sha256_bytes(data)}],
            'tool_version': __version__,
            'wall_clock': round(wall_clock, 3),
            'exit_code': exit_code,
        }
