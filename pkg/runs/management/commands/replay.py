import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import BaseCommand

from overlap_lab.exceptions import InconclusiveResult, ReplayMismatch, ValidationProblem

from runs.manifest import DIGESTED_FORMATS, load_manifest, sha256_file


class Command(BaseCommand):
    help = 'Re-run a recorded manifest and compare the JSON/CSV output digests'

    def add_arguments(self, parser):
        parser.add_argument('manifest', help='Arquivo <out>.manifest.json')
        parser.add_argument('--keep', action='store_true', help='Mantém o diretório temporário da reexecução')

    def handle(self, *args, **options):
        manifest = load_manifest(options['manifest'])
        for path, digest in manifest['input_digests'].items():
            if not Path(path).exists():
                raise ValidationProblem(f"input {path} of the recorded run is missing")
            if sha256_file(path) != digest:
                raise ValidationProblem(f"input {path} changed since the recorded run")

        self.stdout.write(f"Replaying {' '.join(manifest['argv'])}...")
        scratch = Path(tempfile.mkdtemp(prefix='overlap-replay-'))
        differences = []
        for entry in manifest['outputs']:
            if entry['format'] not in DIGESTED_FORMATS:
                self.stdout.write(f"⏭️ Skipping {entry['format']} output {entry['path']}")
                continue
            target = scratch / Path(entry['path']).name
            argv = [a for a in manifest['argv'][1:] if not a.startswith('--out=')] + [f'--out={target}']
            try:
                call_command(manifest['command'], *argv, stdout=StringIO(), stderr=StringIO())
            except InconclusiveResult:
                # the recorded run ended the same way; its output was still written
                if manifest['exit_code'] != 3:
                    raise
            digest = sha256_file(target)
            if digest != entry['sha256']:
                differences.append({'path': entry['path'], 'recorded': entry['sha256'], 'replayed': digest})

        if not options['keep']:
            for item in scratch.iterdir():
                item.unlink()
            scratch.rmdir()
        if differences:
            for diff in differences:
                self.stdout.write(self.style.ERROR(f"❌ {diff['path']}: {diff['recorded']} != {diff['replayed']}"))
            raise ReplayMismatch(f"{len(differences)} output(s) differ from the recorded run", differences)
        self.stdout.write(self.style.SUCCESS(f"✅ {len(manifest['outputs'])} output(s) reproduced byte for byte"))
