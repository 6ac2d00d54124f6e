import json
import logging
import shutil
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from io import StringIO
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.test import SimpleTestCase, TestCase, override_settings

from overlap_lab.cli import cli_dispatch
from overlap_lab.exceptions import BudgetExhausted, ReplayMismatch, ValidationProblem

from geometry.overlap import overlap_value
from geometry.points import random_point_set
from geometry.serializers import point_set_csv, render_json
from hypergraphs.serializers import HypergraphSerializer
from hypergraphs.structures import complete_hypergraph

from .manifest import manifest_path_for, sha256_file
from .models import RunManifest


class LabCommandTestCase(TestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp(prefix='overlap-lab-test-'))
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)
        lab = dict(settings.OVERLAP_LAB, OUTPUT_DIR=str(self.tmp / 'outputs'))
        override = override_settings(OVERLAP_LAB=lab)
        override.enable()
        self.addCleanup(override.disable)

        self.points = random_point_set(8, np.random.default_rng(21))
        self.points_file = self.tmp / 'p.csv'
        self.points_file.write_text(point_set_csv(self.points))
        self.hypergraph = complete_hypergraph(8, 3)
        self.hypergraph_file = self.tmp / 'h.json'
        self.hypergraph_file.write_bytes(render_json(HypergraphSerializer(self.hypergraph).data))

    def call(self, *args):
        call_command(*args, stdout=StringIO(), stderr=StringIO())

    def dispatch(self, *argv):
        with redirect_stdout(StringIO()), redirect_stderr(StringIO()):
            return cli_dispatch([str(a) for a in argv])


class LabCommandOutputTests(LabCommandTestCase):
    def test_overlap_eval_writes_report_and_manifest(self):
        out = self.tmp / 'overlap.json'
        self.call('overlap', 'eval', '--hypergraph', str(self.hypergraph_file),
                  '--points', str(self.points_file), '--out', str(out))
        payload = json.loads(out.read_text())
        expected = overlap_value(self.hypergraph, self.points)
        self.assertEqual(payload['fraction'], str(expected.fraction))
        self.assertEqual(payload['covered'], expected.covered)
        self.assertFalse(payload['lower_bound'])

        manifest = json.loads(manifest_path_for(out).read_text())
        self.assertEqual(manifest['command'], 'overlap')
        self.assertEqual(manifest['outputs'][0]['sha256'], sha256_file(out))
        self.assertEqual(manifest['input_digests'][str(self.points_file)], sha256_file(self.points_file))
        self.assertEqual(RunManifest.objects.count(), 1)
        self.assertEqual(RunManifest.objects.get().seed, '0')

    def test_stdout_output_skips_the_manifest(self):
        stdout = StringIO()
        call_command('depth', '--points', str(self.points_file), '--out', '-', stdout=stdout, stderr=StringIO())
        payload = json.loads(stdout.getvalue())
        self.assertEqual(payload['total'], 56)
        self.assertEqual(RunManifest.objects.count(), 0)

    def test_default_output_goes_to_the_output_dir(self):
        self.call('construct', 'regular', '--n', '12', '--r', '3', '--seed', '4')
        out = self.tmp / 'outputs' / 'construct-regular.json'
        payload = json.loads(out.read_text())
        self.assertEqual(len(payload['edges']), 12)

    def test_unsupported_format(self):
        with self.assertRaises(ValidationProblem):
            self.call('construct', 'regular', '--n', '12', '--r', '3', '--format', 'svg')

    def test_cayley_from_permutation_generators(self):
        out = self.tmp / 's3.json'
        self.call('construct', 'cayley', '--generators', '1,0,2;1,2,0', '--connection', '1,0,2;1,2,0;2,0,1',
                  '--r', '3', '--out', str(out))
        payload = json.loads(out.read_text())
        # only the cosets of the 3-cycle close up into triangles
        self.assertEqual(payload['n'], 6)
        self.assertEqual(len(payload['edges']), 2)

    def test_cayley_cyclic_residues(self):
        out = self.tmp / 'z5.json'
        self.call('construct', 'cayley', '--order', '5', '--connection', '1,4,2,3', '--r', '3', '--out', str(out))
        self.assertEqual(len(json.loads(out.read_text())['edges']), 10)

    def test_cayley_bad_permutation(self):
        with self.assertRaises(ValidationProblem):
            self.call('construct', 'cayley', '--generators', '1,1,2', '--connection', '1,1,2', '--r', '3')
        with self.assertRaises(ValidationProblem):
            self.call('construct', 'cayley', '--generators', '1,x,0', '--connection', '1,0,2', '--r', '3')

    def test_cover_beyond_budget(self):
        big = self.tmp / 'big.csv'
        big.write_text(point_set_csv(random_point_set(61, np.random.default_rng(2))))
        with self.assertRaises(BudgetExhausted):
            self.call('regularity', 'cover', '--points', str(big), '--q', '1/2,1/2')


class GoldenManifestTests(LabCommandTestCase):
    def record(self, *args):
        out = args[args.index('--out') + 1]
        self.call(*args)
        return manifest_path_for(out)

    def test_overlap_report_replays(self):
        manifest = self.record('overlap', 'eval', '--hypergraph', str(self.hypergraph_file),
                               '--points', str(self.points_file), '--out', str(self.tmp / 'o.json'))
        self.call('replay', str(manifest))

    def test_trend_table_replays(self):
        manifest = self.record('experiment', 'ctrend', '--ns', '3,4,6', '--steps', '0', '--format', 'csv',
                               '--out', str(self.tmp / 'trend.csv'))
        self.assertTrue((self.tmp / 'trend.csv').read_text().startswith('n,upper,upper_float,method,family\n'))
        self.call('replay', str(manifest))

    def test_annealing_replays(self):
        manifest = self.record('experiment', 'anneal', '--complete', '6', '--chains', '2', '--steps', '12',
                               '--seed', '99', '--out', str(self.tmp / 'anneal.json'))
        self.call('replay', str(manifest))

    def test_tampered_digest_is_reported(self):
        manifest = self.record('construct', 'regular', '--n', '9', '--r', '3', '--out', str(self.tmp / 'r.json'))
        record = json.loads(manifest.read_text())
        record['outputs'][0]['sha256'] = '0' * 64
        manifest.write_text(json.dumps(record))
        with self.assertRaises(ReplayMismatch):
            self.call('replay', str(manifest))

    def test_changed_input_is_rejected(self):
        manifest = self.record('depth', '--points', str(self.points_file), '--out', str(self.tmp / 'd.json'))
        self.points_file.write_text(point_set_csv(random_point_set(8, np.random.default_rng(22))))
        with self.assertRaises(ValidationProblem):
            self.call('replay', str(manifest))


class CliDispatchTests(LabCommandTestCase):
    def test_complete_triangle_trend(self):
        out = self.tmp / 'c3.json'
        self.assertEqual(self.dispatch('experiment', 'ctrend', '--n', 3, '--out', out), 0)
        payload = json.loads(out.read_text())
        self.assertEqual(payload['estimates'][0]['upper'], '1')

    def test_cones_meet_the_epsilon_target(self):
        points = self.tmp / 'cloud.csv'
        points.write_text(point_set_csv(random_point_set(242, np.random.default_rng(5))))
        out = self.tmp / 'cones.json'
        code = self.dispatch('partition', 'cones', '--points', points, '--q', '1/2,1/2', '--k', 121,
                             '--epsilon', '0.1', '--out', out)
        self.assertEqual(code, 0)
        audit = json.loads(out.read_text())['audit']
        self.assertLessEqual(Fraction(audit['fraction']), Fraction(1, 10))

    def test_unknown_flag_is_a_usage_error(self):
        self.assertEqual(self.dispatch('depth', '--points', self.points_file, '--bogus'), 2)

    def test_unknown_command(self):
        self.assertEqual(self.dispatch('frobnicate'), 2)

    def test_missing_input_is_a_validation_error(self):
        self.assertEqual(self.dispatch('depth', '--points', self.tmp / 'missing.csv'), 2)

    def test_bad_hypergraph_file_is_a_validation_error(self):
        broken = self.tmp / 'broken.json'
        broken.write_text('{"n": 3, "arity": 3, "edges": [[0, 1, 7]]}')
        code = self.dispatch('overlap', 'eval', '--hypergraph', broken, '--points', self.points_file)
        self.assertEqual(code, 2)

    def test_budget_exhaustion_exits_with_three(self):
        big = self.tmp / 'big.csv'
        big.write_text(point_set_csv(random_point_set(61, np.random.default_rng(2))))
        self.assertEqual(self.dispatch('regularity', 'cover', '--points', big, '--q', '1/2,1/2'), 3)


class LoggingConfigTests(SimpleTestCase):
    def test_every_app_logs_through_the_lab_handlers(self):
        for app in ('overlap_lab', *settings.LAB_APPS):
            logger = logging.getLogger(app)
            self.assertEqual(logger.level, logging.DEBUG, app)
            self.assertFalse(logger.propagate)
            self.assertEqual(sorted(type(h).__name__ for h in logger.handlers), ['FileHandler', 'StreamHandler'])
            self.assertEqual(logging.getLogger(f'{app}.module').getEffectiveLevel(), logging.DEBUG)
