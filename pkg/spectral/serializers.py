from rest_framework import serializers


class DecimalStringListField(serializers.ListField):
    """Floats written as shortest round-trip decimal strings."""

    child = serializers.CharField()

    def to_representation(self, data):
        return [repr(float(v)) for v in data]


class SpectralReportSerializer(serializers.Serializer):
    """Serializer para relatórios espectrais."""

    n = serializers.IntegerField()
    k = serializers.IntegerField()
    regular = serializers.BooleanField()
    eigenvalues = DecimalStringListField()
    lam = serializers.SerializerMethodField()
    error_bound = serializers.SerializerMethodField()
    ramanujan = serializers.SerializerMethodField()

    def get_lam(self, obj):
        return repr(float(obj.lam))

    def get_error_bound(self, obj):
        return repr(float(obj.error_bound))

    def get_ramanujan(self, obj):
        from .analysis import is_ramanujan
        return is_ramanujan(obj)


class MixingCheckSerializer(serializers.Serializer):
    pairs = serializers.IntegerField()
    expected = serializers.SerializerMethodField()
    lhs = serializers.SerializerMethodField()
    rhs = serializers.SerializerMethodField()
    holds = serializers.BooleanField()

    def get_expected(self, obj):
        return str(obj.expected)

    def get_lhs(self, obj):
        return str(obj.lhs)

    def get_rhs(self, obj):
        return repr(float(obj.rhs))
