# Generated by Django 4.2.7 on 2026-10-17 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunManifest',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(help_text='Subcomando executado (ex.: overlap, partition)', max_length=50, verbose_name='Comando')),
                ('action', models.CharField(blank=True, help_text='Ação do subcomando (ex.: eval, cones)', max_length=50, verbose_name='Ação')),
                ('argv', models.JSONField(default=list, help_text='Linha de comando completa, reexecutada pelo replay', verbose_name='Argumentos')),
                ('parameters', models.JSONField(default=dict, verbose_name='Parâmetros')),
                ('seed', models.CharField(max_length=20, verbose_name='Semente')),
                ('input_digests', models.JSONField(default=dict, help_text='sha256 de cada arquivo de entrada', verbose_name='Hashes de Entrada')),
                ('outputs', models.JSONField(default=list, help_text='Caminho, formato e sha256 de cada saída', verbose_name='Arquivos de Saída')),
                ('tool_version', models.CharField(max_length=20, verbose_name='Versão da Ferramenta')),
                ('wall_clock', models.FloatField(verbose_name='Tempo de Execução (s)')),
                ('exit_code', models.SmallIntegerField(default=0, verbose_name='Código de Saída')),
                ('manifest_path', models.CharField(blank=True, max_length=500, verbose_name='Arquivo do Manifesto')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Data de Criação')),
            ],
            options={
                'verbose_name': 'Manifesto de Execução',
                'verbose_name_plural': 'Manifestos de Execução',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', 'created_at'], name='runs_command_created_idx')],
            },
        ),
    ]
