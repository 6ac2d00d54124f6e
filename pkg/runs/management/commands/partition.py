import math
from fractions import Fraction

import numpy as np

from overlap_lab.exceptions import ValidationProblem

from partitions.cones import radial_audit, radial_homogeneous_partition
from partitions.homogeneity import extract_homogeneous_subsets, homogeneity_audit
from partitions.plotting import cone_partition_svg, sector_partition_svg
from partitions.sectors import ceder_partition
from partitions.serializers import (
    ExtractionResultSerializer, HomogeneityAuditSerializer, LabeledPartitionSerializer, RadialAuditSerializer,
    SectorPartitionSerializer,
)

from runs.base import LabCommand, RunOutput, parse_point


class Command(LabCommand):
    help = 'Point-set partitions: six-sector (ceder), radial cones, homogeneous extraction, homogeneity audit'
    name = 'partition'
    actions = ('ceder', 'cones', 'extract', 'audit')
    formats = {'ceder': ('json', 'svg'), 'cones': ('json', 'svg'), 'extract': ('json',), 'audit': ('json',)}

    def add_command_arguments(self, parser):
        parser.add_argument('--points', required=True, help='Pontos em CSV (x,y) ou JSON')
        parser.add_argument('--q', help="Ponto central 'x,y' (cones, extract, audit)")
        parser.add_argument('--sets', help='JSON com d+1 listas de índices de pontos (extract)')
        parser.add_argument('--partition', help='Partição rotulada em JSON (audit)')
        parser.add_argument('--budget', type=int, help='Orçamento do teste de força bruta (audit)')

    def center(self, options):
        if not options['q']:
            raise ValidationProblem("this action needs the centre --q x,y")
        return parse_point(options['q'])

    def run(self, action, options):
        points = self.read_points(options['points'])
        return getattr(self, f'run_{action}')(points, options)

    def run_ceder(self, points, options):
        partition = ceder_partition(points)
        return RunOutput(
            payload=SectorPartitionSerializer(partition).data,
            summary=f"Six sectors around {partition.apex} with counts {partition.counts}",
            svg=lambda: sector_partition_svg(partition),
        )

    def run_cones(self, points, options):
        q = self.center(options)
        epsilon = options['epsilon']
        k = options['k']
        if k is None:
            if epsilon is None:
                raise ValidationProblem("partition cones needs --k or --epsilon")
            k = math.ceil(12 / epsilon) + 1
        partition = radial_homogeneous_partition(points, q, k)
        audit = radial_audit(partition)
        inconclusive = None
        if epsilon is not None and audit.fraction > Fraction(epsilon):
            inconclusive = f"non-homogeneous fraction {audit.fraction} exceeds epsilon {epsilon}"
        return RunOutput(
            payload={'partition': LabeledPartitionSerializer(partition).data,
                     'audit': RadialAuditSerializer(audit).data},
            summary=f"{k} cones: {audit.nonhomogeneous} of {audit.triples} triples non-homogeneous "
                    f"({float(audit.fraction):.4f} <= {float(audit.fraction_bound):.4f})",
            svg=lambda: cone_partition_svg(partition),
            inconclusive=inconclusive,
        )

    def run_extract(self, points, options):
        q = self.center(options)
        if not options['sets']:
            raise ValidationProblem("partition extract needs --sets")
        sets = self.read_json(options['sets'])
        if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
            raise ValidationProblem("--sets must hold a JSON list of index lists")
        try:
            chosen = [[points[int(i)] for i in s] for s in sets]
        except (IndexError, ValueError, TypeError) as e:
            raise ValidationProblem(f"bad point index in --sets: {e}") from e
        result = extract_homogeneous_subsets(q, chosen, rng=np.random.default_rng(options['seed']))
        inconclusive = None
        if result.status.homogeneous is None:
            inconclusive = "extracted subsets could not be certified homogeneous"
        return RunOutput(
            payload=ExtractionResultSerializer(result).data,
            summary=f"Homogeneous subsets of sizes {result.sizes} ({result.status.status})",
            inconclusive=inconclusive,
        )

    def run_audit(self, points, options):
        q = self.center(options)
        if not options['partition']:
            raise ValidationProblem("partition audit needs --partition")
        serializer = LabeledPartitionSerializer(data=self.read_json(options['partition']),
                                                context={'points': points})
        serializer.is_valid(raise_exception=True)
        partition = serializer.save()
        audit = homogeneity_audit(partition, q, budget=options['budget'])
        inconclusive = None
        if audit.unknown:
            inconclusive = f"{audit.unknown} of {audit.tuples} tuples left undecided"
        return RunOutput(
            payload=HomogeneityAuditSerializer(audit).data,
            summary=f"{audit.homogeneous} of {audit.tuples} tuples homogeneous, {audit.mixed} mixed",
            inconclusive=inconclusive,
        )
