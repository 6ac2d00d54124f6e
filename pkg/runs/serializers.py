from rest_framework import serializers

from .models import RunManifest


class RunManifestSerializer(serializers.ModelSerializer):
    """Serializer para manifestos de execução (arquivo <out>.manifest.json e tabela RunManifest)."""

    class Meta:
        model = RunManifest
        fields = [
            'command', 'action', 'argv', 'parameters', 'seed', 'input_digests',
            'outputs', 'tool_version', 'wall_clock', 'exit_code', 'manifest_path',
        ]

    def validate_argv(self, value):
        """Valida a linha de comando gravada."""
        if not value or not all(isinstance(a, str) for a in value):
            raise serializers.ValidationError("A linha de comando deve ser uma lista não vazia de textos.")
        return value

    def validate_outputs(self, value):
        """Valida a lista de saídas."""
        for entry in value:
            if not {'path', 'format', 'sha256'} <= set(entry):
                raise serializers.ValidationError("Cada saída precisa de 'path', 'format' e 'sha256'.")
        return value
