import csv
import io

from rest_framework import serializers

from .structures import Graph, Hypergraph


class HypergraphSerializer(serializers.Serializer):
    """Serializer para hipergrafos: {"n": N, "arity": K, "edges": [[v, ...], ...], "provenance": {...}}."""

    n = serializers.IntegerField(min_value=0)
    arity = serializers.IntegerField(min_value=1)
    edges = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField(min_value=0)))
    provenance = serializers.DictField(required=False, default=dict)

    def validate(self, attrs):
        n, arity = attrs['n'], attrs['arity']
        for edge in attrs['edges']:
            if len(edge) != arity or len(set(edge)) != arity:
                raise serializers.ValidationError(
                    f"Cada hiperaresta deve ter {arity} vértices distintos; recebido {edge}."
                )
            if max(edge) >= n:
                raise serializers.ValidationError(f"Vértice fora do intervalo [0, {n}) em {edge}.")
        return attrs

    def create(self, validated_data):
        return Hypergraph(validated_data['n'], validated_data['arity'],
                          tuple(tuple(e) for e in validated_data['edges']),
                          validated_data.get('provenance') or {})

    def to_representation(self, instance):
        return {
            'n': instance.n,
            'arity': instance.arity,
            'edges': [list(e) for e in instance.edges],
            'provenance': instance.provenance,
        }


class GraphSerializer(serializers.Serializer):
    """Serializer para grafos simples: {"n": N, "edges": [[u, v], ...]}."""

    n = serializers.IntegerField(min_value=0)
    edges = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=2, max_length=2)
    )
    provenance = serializers.DictField(required=False, default=dict)

    def validate(self, attrs):
        for u, v in attrs['edges']:
            if u == v:
                raise serializers.ValidationError(f"Laço no vértice {u} não é permitido.")
            if max(u, v) >= attrs['n']:
                raise serializers.ValidationError(f"Aresta ({u}, {v}) fora do intervalo de vértices.")
        return attrs

    def create(self, validated_data):
        return Graph(validated_data['n'], tuple(tuple(e) for e in validated_data['edges']),
                     validated_data.get('provenance') or {})

    def to_representation(self, instance):
        return {'n': instance.n, 'edges': [list(e) for e in instance.edges], 'provenance': instance.provenance}


class PartitionFamilySerializer(serializers.Serializer):
    n = serializers.IntegerField()
    b = serializers.IntegerField()
    t = serializers.IntegerField()
    attempts = serializers.IntegerField()
    partitions = serializers.SerializerMethodField()

    def get_partitions(self, obj):
        return [[list(part) for part in partition] for partition in obj.partitions]


def hypergraph_csv(hypergraph):
    """Uma hiperaresta por linha: v0,v1,...,v{arity-1}."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow([f'v{i}' for i in range(hypergraph.arity)])
    writer.writerows(hypergraph.edges)
    return buffer.getvalue()
