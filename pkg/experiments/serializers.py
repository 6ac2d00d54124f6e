import csv
import io
import math

from rest_framework import serializers

from geometry.serializers import PointField, RationalField, point_set_payload


class PointSetField(serializers.Field):
    def to_representation(self, value):
        return point_set_payload(value)


class AzumaPointSerializer(serializers.Serializer):
    lam = serializers.IntegerField()
    bound = serializers.FloatField()


class BijectionStudySerializer(serializers.Serializer):
    """Serializer para o estudo de bijeções aleatórias (quantis, ponto profundo e curva de Azuma)."""

    n = serializers.IntegerField()
    edges = serializers.IntegerField()
    trials = serializers.IntegerField()
    mean = RationalField()
    p95 = RationalField()
    maximum = RationalField()
    deep_fraction = RationalField()
    expected_hits = RationalField()
    max_degree = serializers.IntegerField()
    counts = serializers.ListField(child=serializers.IntegerField())
    azuma = serializers.SerializerMethodField()

    def get_azuma(self, obj):
        return AzumaPointSerializer([{'lam': lam, 'bound': bound} for lam, bound in obj.azuma], many=True).data


class AdversarialResultSerializer(serializers.Serializer):
    embedding = PointSetField()
    covered = serializers.IntegerField()
    total = serializers.IntegerField()
    fraction = RationalField()
    witness = PointField(source='witness.coords')
    chain = serializers.IntegerField()
    chains = serializers.SerializerMethodField()

    def get_chains(self, obj):
        return [{'chain': chain, 'covered': covered} for chain, covered in obj.chains]


class OverlapEstimateSerializer(serializers.Serializer):
    """Serializer para estimativas de c(K_n^3): limitante superior com a imersão testemunha."""

    n = serializers.IntegerField()
    d = serializers.IntegerField()
    upper = RationalField()
    upper_method = serializers.CharField()
    lower = RationalField(allow_null=True)
    lower_method = serializers.CharField()
    witness_family = serializers.CharField()
    witness = PointSetField()
    witness_point = PointField(source='witness_point.coords')
    candidates = serializers.SerializerMethodField()

    def get_candidates(self, obj):
        return [{'family': name, 'fraction': str(fraction)} for name, fraction in obj.candidates]


class TrendRowSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    upper = RationalField()
    method = serializers.CharField()
    family = serializers.CharField()


def trend_csv(rows):
    """Tabela de tendência em CSV: n,upper,upper_float,method,family."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['n', 'upper', 'upper_float', 'method', 'family'])
    for row in rows:
        writer.writerow([row.n, str(row.upper), f'{float(row.upper):.6f}', row.method, row.family])
    return buffer.getvalue()


class DuplicationCheckSerializer(serializers.Serializer):
    m = serializers.IntegerField()
    before = RationalField()
    after = RationalField()
    degenerate = RationalField()
    offset = RationalField()
    passed = serializers.BooleanField()


class EmbeddingAuditSerializer(serializers.Serializer):
    source = serializers.CharField()
    covered = serializers.IntegerField()
    total = serializers.IntegerField()
    fraction = RationalField()
    method = serializers.CharField()
    apex_covered = serializers.IntegerField()
    sector_counts = serializers.ListField(child=serializers.IntegerField())
    core_size = serializers.SerializerMethodField()
    core_bound = serializers.FloatField()
    core_bound_vacuous = serializers.BooleanField()
    apex_bound = serializers.FloatField()
    apex_bound_holds = serializers.BooleanField()

    def get_core_size(self, obj):
        return len(obj.core)


class ExpanderReportSerializer(serializers.Serializer):
    """Serializer para o relatório do pipeline de expansores (|A|, limitantes e sobreposição observada)."""

    n = serializers.IntegerField()
    k = serializers.IntegerField()
    lam = serializers.FloatField()
    delta = RationalField()
    edges = serializers.IntegerField()
    minimum = RationalField()
    deficits = serializers.DictField(child=serializers.FloatField())
    embeddings = EmbeddingAuditSerializer(many=True)


class WalkAuditSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    k = serializers.IntegerField()
    lam = serializers.FloatField()
    c_prime = RationalField()
    sizes = serializers.ListField(child=serializers.IntegerField())
    bounds = serializers.SerializerMethodField()
    completing = serializers.IntegerField()

    def get_bounds(self, obj):
        # an empty pruned block leaves no finite bound
        return [b if math.isfinite(b) else None for b in obj.bounds]
