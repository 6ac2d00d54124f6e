"""Entry point of the lab commands with the exit-code contract (0 ok, 1 bug, 2 invalid, 3 budget/unknown)."""
import logging
import os
import sys

from rest_framework import serializers

logger = logging.getLogger(__name__)

LAB_COMMANDS = ('construct', 'overlap', 'depth', 'partition', 'spectral', 'regularity', 'experiment', 'replay')

USAGE = """usage: manage.py <command> [action] [options]

commands:
  construct {partition|neighborhood|walk|cayley|regular}
  overlap eval --hypergraph H.json --points P.csv
  depth --points P.csv [--query x,y]
  partition {ceder|cones|extract|audit} --points P.csv [--q x,y]
  spectral [--graph G.json | --named petersen]
  regularity {run|cover|partition}
  experiment {bijection|anneal|ctrend|expander|duplicate}
  replay OUT.manifest.json

global options: --seed --out --format {json,csv,svg} --d --epsilon --k --trials --threads --async
'manage.py <command> --help' documents each command and its file formats.
"""


def cli_dispatch(argv):
    """Run one lab command and return its exit code instead of raising."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'overlap_lab.settings')
    import django
    from django.core.management import load_command_class
    from django.core.management.base import CommandError

    from overlap_lab.exceptions import OverlapLabError

    argv = list(argv)
    if not argv or argv[0] in ('-h', '--help'):
        sys.stdout.write(USAGE)
        return 0 if argv else 2
    if argv[0] not in LAB_COMMANDS:
        sys.stderr.write(f"unknown command {argv[0]!r}\n\n{USAGE}")
        return 2

    django.setup()
    command = load_command_class('runs', argv[0])
    # argparse errors print the usage and exit with status 2
    command._called_from_command_line = True
    parser = command.create_parser('manage.py', argv[0])
    try:
        options = parser.parse_args(argv[1:])
    except SystemExit as exc:
        return exc.code or 0
    cmd_options = vars(options)
    args = cmd_options.pop('args', ())
    try:
        command.execute(*args, **cmd_options)
    except OverlapLabError as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return e.exit_code
    except serializers.ValidationError as e:
        sys.stderr.write(f"ValidationError: {e.detail}\n")
        return 2
    except CommandError as e:
        sys.stderr.write(f"CommandError: {e}\n")
        return e.returncode
    return 0
