import csv
import io
from pathlib import Path

from rest_framework import serializers
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from overlap_lab.exceptions import ValidationProblem

from .points import Point, PointSet, to_rational


class RationalField(serializers.Field):
    """Exact rational written as 'p/q' or an integer string."""

    default_error_messages = {
        'invalid': 'Informe um racional exato como "p/q" ou um inteiro.',
    }

    def to_representation(self, value):
        return str(to_rational(value))

    def to_internal_value(self, data):
        if isinstance(data, float):
            self.fail('invalid')
        try:
            return to_rational(data)
        except ValidationProblem:
            self.fail('invalid')


class PointField(serializers.ListField):
    child = RationalField()

    def to_representation(self, data):
        return [self.child.to_representation(c) for c in data]


class PointSetSerializer(serializers.Serializer):
    """Serializer para conjuntos de pontos: {"d": 2, "points": [["1/2", "3"], ...]}."""

    d = serializers.IntegerField(min_value=1)
    points = serializers.ListField(child=PointField(min_length=1))

    def validate(self, attrs):
        d = attrs['d']
        for row in attrs['points']:
            if len(row) != d:
                raise serializers.ValidationError(
                    f"Todos os pontos devem ter {d} coordenadas; recebido {len(row)}."
                )
        return attrs

    def create(self, validated_data):
        return PointSet(tuple(Point(tuple(row)) for row in validated_data['points']), validated_data['d'])


class OverlapReportSerializer(serializers.Serializer):
    witness = PointField(source='witness.coords')
    covered = serializers.IntegerField()
    total = serializers.IntegerField()
    fraction = RationalField()
    method = serializers.CharField()
    provenance = serializers.CharField()
    lower_bound = serializers.BooleanField()
    coincident = serializers.BooleanField()
    evaluated = serializers.IntegerField()


class DepthReportSerializer(serializers.Serializer):
    query = PointField()
    count = serializers.IntegerField()
    total = serializers.IntegerField()
    fraction = RationalField()
    method = serializers.CharField()
    coincident = serializers.BooleanField()


def point_set_payload(points):
    return {'d': points.d, 'points': [[str(c) for c in p] for p in points]}


def render_json(payload, indent=2):
    """Deterministic JSON bytes (key order preserved, trailing newline)."""
    return JSONRenderer().render(payload, renderer_context={'indent': indent}) + b'\n'


def parse_json(raw):
    return JSONParser().parse(io.BytesIO(raw if isinstance(raw, bytes) else raw.encode()))


def load_point_set_json(raw):
    serializer = PointSetSerializer(data=parse_json(raw))
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def load_point_set_csv(text):
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise serializers.ValidationError("Arquivo CSV vazio.")
    header = [cell.strip() for cell in rows[0]]
    if not header or header[0] != 'x':
        raise serializers.ValidationError("O cabeçalho do CSV deve começar com 'x' (x,y[,z...]).")
    serializer = PointSetSerializer(data={'d': len(header), 'points': [[c.strip() for c in r] for r in rows[1:]]})
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def read_point_set(path):
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    if path.suffix.lower() == '.json':
        return load_point_set_json(text)
    return load_point_set_csv(text)


def point_set_csv(points):
    axes = ['x', 'y', 'z'] + [f'x{i}' for i in range(4, points.d + 1)]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(axes[:points.d])
    for p in points:
        writer.writerow([str(c) for c in p])
    return buffer.getvalue()
