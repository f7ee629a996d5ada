# vim: set fileencoding=utf-8 :
"""Test the weak scaling benchmark, L{cmr.bench}"""

from . import context

import csv
import os
import unittest

from cmr.bench import (AUTO, COLUMNS, BenchPoint, pair_points, parse_fractions,
                       run_bench, scaling_table)
from cmr.engine import StageSpec
from cmr.errors import ConfigurationError
from cmr.ingest import TEXT_FILE, Source
from cmr.mountpoint import MountPoint
from cmr.pipeline import MAP, PipelineSpec, RunConfig, SinkSpec, StageDef
from cmr.scripts.bench import main as bench_main
from .testutils import CmrLogTester, FunctionBackend, capture_stdout, sum_lines


class TestScalingTable(unittest.TestCase):
    def test_equal_times_are_ideal(self):
        rows = scaling_table([BenchPoint(1, 0.25, 10, 2.0, 5.0),
                              BenchPoint(4, 1.0, 40, 2.0, 5.0)])
        self.assertEqual([r['wse'] for r in rows], [1.0, 1.0])
        self.assertEqual([r['ingest_speedup'] for r in rows], [1.0, 1.0])

    def test_base_is_smallest_pool(self):
        rows = scaling_table([BenchPoint(4, 1.0, 40, 1.0, 20.0),
                              BenchPoint(2, 0.5, 20, 2.0, 10.0)])
        self.assertEqual(rows[0]['wse'], 0.5)
        self.assertEqual(rows[0]['ingest_speedup'], 2.0)
        self.assertEqual(list(rows[0].keys()), list(COLUMNS))

    def test_zero_time(self):
        rows = scaling_table([BenchPoint(1, 1.0, 1, 0.0, 0.0)])
        self.assertIsNone(rows[0]['wse'])
        self.assertIsNone(rows[0]['ingest_speedup'])


class TestPairs(unittest.TestCase):
    def test_auto(self):
        self.assertEqual(pair_points([2, 8], AUTO), [(2, 0.25), (8, 1.0)])

    def test_unpaired(self):
        self.assertRaises(ConfigurationError, pair_points, [1, 2, 4], [0.5, 1.0])

    def test_invalid(self):
        self.assertRaises(ConfigurationError, pair_points, [], AUTO)
        self.assertRaises(ConfigurationError, pair_points, [0, 1], AUTO)
        self.assertRaises(ConfigurationError, pair_points, [1], [1.5])
        self.assertRaises(ConfigurationError, parse_fractions, '1/0')
        self.assertRaises(ConfigurationError, parse_fractions, 'half')


class TestRunBench(unittest.TestCase, CmrLogTester):
    def __init__(self, methodName='runTest'):
        unittest.TestCase.__init__(self, methodName)
        CmrLogTester.__init__(self)

    def setUp(self):
        self.tmpdir = context.new_tmpdir(__name__)
        self.corpus = self.tmpdir.join('numbers.txt')
        with open(self.corpus, 'w') as f:
            f.write(''.join('%d\n' % n for n in range(1, 101)))
        stage = StageSpec(MountPoint.text_file('/in'), MountPoint.text_file('/out'),
                          'busybox', "awk '{s+=$1} END {print s}' /in > /out")
        self.spec = PipelineSpec(Source(TEXT_FILE, self.corpus), [StageDef(MAP, stage)],
                                 SinkSpec('text', self.tmpdir.join('never-written.txt')))
        self.config = RunConfig(executor='subprocess', temp_root=self.tmpdir.join('temp'))
        self._capture_log(True)

    def tearDown(self):
        self._capture_log(False)
        context.teardown()

    def test_injected_timings(self):
        ticks = iter([0, 8, 8, 108,
                      200, 204, 204, 304,
                      400, 402, 402, 527])
        backend = FunctionBackend(sum_lines)
        rows = run_bench(self.spec, [1, 2, 4], AUTO, self.config, backend=backend,
                         clock=lambda: next(ticks))
        self.assertEqual([r['pool'] for r in rows], [1, 2, 4])
        self.assertEqual([r['fraction'] for r in rows], [0.25, 0.5, 1.0])
        self.assertEqual([r['records'] for r in rows], [25, 50, 100])
        self.assertEqual([r['wse'] for r in rows], [1.0, 1.0, 0.8])
        self.assertEqual([r['ingest_speedup'] for r in rows], [1.0, 2.0, 4.0])
        # one map task per partition, one partition per pool slot
        self.assertEqual(len(backend.calls), 1 + 2 + 4)
        self.assertEqual(self.config.workers, 1)

    def test_sink_not_written(self):
        run_bench(self.spec, [1], AUTO, self.config, backend=FunctionBackend(sum_lines))
        self.assertFalse(os.path.exists(self.spec.sink.path))

    def write_pipeline(self):
        path = self.tmpdir.join('sum.pipeline')
        with open(path, 'w') as f:
            f.write("[pipeline]\nversion = 1\n\n"
                    "[source]\nkind = text_file\nlocation = %s\n\n"
                    "[stage 1]\nop = map\nimage = busybox\n"
                    "input = TextFile:/in\noutput = TextFile:/out\n"
                    "command = awk '{s+=$1} END {print s}' /in > /out\n\n"
                    "[sink]\nkind = text\npath = sum.txt\n" % self.corpus)
        return path

    def test_bench_command(self):
        path = self.write_pipeline()
        csv_path = self.tmpdir.join('bench.csv')
        with capture_stdout() as out:
            ret = bench_main(['bench', '--executor=subprocess', '--pools=1,2',
                              '--fractions=1/2,1', '--temp-root=%s' % self.tmpdir.join('temp'),
                              '--csv=%s' % csv_path, path])
        self.assertEqual(ret, 0)
        self.assertIn('ingest_speedup', out.output())
        with open(csv_path) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual([r['pool'] for r in rows], ['1', '2'])
        self.assertEqual([r['records'] for r in rows], ['50', '100'])

    def test_bench_command_unpaired(self):
        ret = bench_main(['bench', '--executor=subprocess', '--pools=1,2',
                          '--fractions=1', self.write_pipeline()])
        self.assertEqual(ret, 2)
        self._check_log(0, "cmr:error: Got 2 pool sizes but 1 fractions")

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
