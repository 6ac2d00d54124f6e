from django.db import models


class RunManifest(models.Model):
    """Registro de uma execução da linha de comando, suficiente para reproduzi-la."""

    command = models.CharField(
        max_length=50,
        verbose_name='Comando',
        help_text='Subcomando executado (ex.: overlap, partition)'
    )
    action = models.CharField(
        max_length=50,
        blank=True,
        verbose_name='Ação',
        help_text='Ação do subcomando (ex.: eval, cones)'
    )
    argv = models.JSONField(
        default=list,
        verbose_name='Argumentos',
        help_text='Linha de comando completa, reexecutada pelo replay'
    )
    parameters = models.JSONField(
        default=dict,
        verbose_name='Parâmetros'
    )
    # Sementes de 64 bits não cabem em BigIntegerField
    seed = models.CharField(
        max_length=20,
        verbose_name='Semente'
    )
    input_digests = models.JSONField(
        default=dict,
        verbose_name='Hashes de Entrada',
        help_text='sha256 de cada arquivo de entrada'
    )
    outputs = models.JSONField(
        default=list,
        verbose_name='Arquivos de Saída',
        help_text='Caminho, formato e sha256 de cada saída'
    )
    tool_version = models.CharField(
        max_length=20,
        verbose_name='Versão da Ferramenta'
    )
    wall_clock = models.FloatField(
        verbose_name='Tempo de Execução (s)'
    )
    exit_code = models.SmallIntegerField(
        default=0,
        verbose_name='Código de Saída'
    )
    manifest_path = models.CharField(
        max_length=500,
        blank=True,
        verbose_name='Arquivo do Manifesto'
    )

    # Campos de auditoria
    created_at = models.DateTimeField(
        auto_now_add=True,
        verbose_name='Data de Criação'
    )

    class Meta:
        verbose_name = 'Manifesto de Execução'
        verbose_name_plural = 'Manifestos de Execução'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['command', 'created_at'], name='runs_command_created_idx'),
        ]

    def __str__(self):
        label = f"{self.command} {self.action}".strip()
        return f"{label} - seed {self.seed} - {self.created_at.strftime('%d/%m/%Y %H:%M')}"
