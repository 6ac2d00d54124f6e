from rest_framework import serializers

from geometry.points import Point
from geometry.serializers import PointField, RationalField

from .cones import CONES, EQUIPARTITION, GENERIC, LabeledPartition


class LabeledPartitionSerializer(serializers.Serializer):
    """Serializer para partições rotuladas: {"kind": "cones", "apex": [..], "blocks": [[idx, ...], ...]}."""

    kind = serializers.ChoiceField(choices=[CONES, EQUIPARTITION, GENERIC])
    apex = PointField(required=False, allow_null=True)
    blocks = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField(min_value=0)))

    def validate(self, attrs):
        if attrs['kind'] == CONES and not attrs.get('apex'):
            raise serializers.ValidationError("Uma partição em cones precisa do ápice.")
        return attrs

    def to_representation(self, instance):
        return {
            'kind': instance.kind,
            'apex': None if instance.apex is None else [str(c) for c in instance.apex],
            'blocks': [list(b) for b in instance.blocks],
        }

    def create(self, validated_data):
        points = self.context.get('points')
        if points is None:
            raise serializers.ValidationError("Os pontos da partição não foram informados.")
        apex = validated_data.get('apex')
        return LabeledPartition(points, tuple(tuple(b) for b in validated_data['blocks']),
                                validated_data['kind'], Point(tuple(apex)) if apex else None)


class SectorPartitionSerializer(serializers.Serializer):
    """Serializer para a partição em seis setores (ápice, três direções e índices por setor)."""

    apex = PointField(read_only=True)
    directions = serializers.SerializerMethodField()
    sectors = serializers.SerializerMethodField()
    counts = serializers.ListField(child=serializers.IntegerField(), read_only=True)
    imbalance = serializers.IntegerField(read_only=True)

    def get_directions(self, obj):
        return [[str(c) for c in d] for d in obj.directions]

    def get_sectors(self, obj):
        return [list(sector) for sector in obj.sectors]


class RadialAuditSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    triples = serializers.IntegerField()
    nonhomogeneous = serializers.IntegerField()
    all_contain = serializers.IntegerField()
    count_bound = serializers.IntegerField()
    fraction = RationalField()
    fraction_bound = RationalField()


class HomogeneityAuditSerializer(serializers.Serializer):
    tuples = serializers.IntegerField()
    homogeneous = serializers.IntegerField()
    mixed = serializers.IntegerField()
    unknown = serializers.IntegerField()
    fraction = RationalField()
    nonhomogeneous_fraction = RationalField()


class ExtractionResultSerializer(serializers.Serializer):
    subsets = serializers.SerializerMethodField()
    sizes = serializers.ListField(child=serializers.IntegerField())
    status = serializers.CharField(source='status.status')
    method = serializers.CharField(source='status.method')
    steps = serializers.ListField(child=serializers.DictField())
    exact = serializers.BooleanField()
    size_guarantee_met = serializers.BooleanField()

    def get_subsets(self, obj):
        return [[[str(c) for c in p] for p in subset] for subset in obj.subsets]
