"""Run manifests: what was executed, on which inputs, producing which bytes."""
import hashlib
import logging
from pathlib import Path

from django.db import DatabaseError, connection

from overlap_lab.conf import lab_setting

from geometry.serializers import parse_json, render_json

from .serializers import RunManifestSerializer

logger = logging.getLogger(__name__)

# SVG output is excluded from replay comparison
DIGESTED_FORMATS = ('json', 'csv')


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()


def sha256_file(path):
    return sha256_bytes(Path(path).read_bytes())


def manifest_path_for(out_path):
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + '.manifest.json')


def write_manifest(record, out_path):
    path = manifest_path_for(out_path)
    record = dict(record, manifest_path=str(path))
    path.write_bytes(render_json(record))
    return path, record


def load_manifest(path):
    serializer = RunManifestSerializer(data=parse_json(Path(path).read_bytes()))
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def record_run(record):
    """Store the manifest in the RunManifest table when recording is on and the table exists."""
    if not lab_setting('RECORD_RUNS'):
        return None
    try:
        if 'runs_runmanifest' not in connection.introspection.table_names():
            logger.debug("RunManifest table missing (run migrate to record runs)")
            return None
        serializer = RunManifestSerializer(data=record)
        serializer.is_valid(raise_exception=True)
        return serializer.save()
    except DatabaseError as e:
        logger.warning(f"Could not record run {record.get('command')}: {str(e)}")
        return None
