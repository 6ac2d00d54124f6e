import csv
import io

from rest_framework import serializers

from geometry.serializers import RationalField


class DensityStepSerializer(serializers.Serializer):
    """Serializer para uma linha do histórico de densidade (iteração, tamanhos, densidade)."""

    iteration = serializers.IntegerField(min_value=0)
    sizes = serializers.ListField(child=serializers.IntegerField(min_value=0))
    density = RationalField()


class SuperregularResultSerializer(serializers.Serializer):
    blocks = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    density = RationalField()
    status = serializers.CharField()
    iterations = serializers.IntegerField(source='state.iteration')
    iteration_cap = serializers.FloatField()
    witnesses_tried = serializers.IntegerField()


class CoverTupleSerializer(serializers.Serializer):
    blocks = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    status = serializers.CharField()
    source = serializers.CharField()
    covered = serializers.IntegerField()


class CoverResultSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    tuples = CoverTupleSerializer(many=True)
    covered = serializers.IntegerField()
    total = serializers.IntegerField()
    covered_fraction = RationalField()
    covered_measure = RationalField()
    beta = RationalField()
    candidates = serializers.IntegerField()
    sources = serializers.DictField(child=serializers.IntegerField())
    theoretical_log10_beta = serializers.FloatField(source='parameters.log10_beta')


def history_rows(state):
    return [{'iteration': i, 'sizes': list(sizes), 'density': density}
            for i, (sizes, density) in enumerate(state.history)]


def history_csv(state):
    """Histórico do DensityState em CSV: iteration,sizes,density (tamanhos separados por ';')."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['iteration', 'sizes', 'density'])
    for row in DensityStepSerializer(history_rows(state), many=True).data:
        writer.writerow([row['iteration'], ';'.join(str(s) for s in row['sizes']), row['density']])
    return buffer.getvalue()
