# vim: set fileencoding=utf-8 :
"""Test pipeline files and running them, L{cmr.pipeline}"""

from . import context

import json
import os
import unittest

import mock

from cmr.dataset import SDF_SEPARATOR
from cmr.engine import StageSpec
from cmr.errors import CmrIOError, PipelineValidationError
from cmr.executor.docker import DockerBackend
from cmr.ingest import BINARY_DIR, OBJECT_PREFIX, Source
from cmr.mountpoint import MountPoint
from cmr.pipeline import (FIELD_DELIMITED, MAP, PREFIX_BYTES, REDUCE, REGEX_CAPTURE,
                          REPARTITION_BY, SINK_BINARY, KeyRule, PipelineSpec,
                          RunConfig, SinkSpec, StageDef, emit_pipeline, escape,
                          parse_pipeline, parse_pipeline_text, run_pipeline,
                          unescape)
from cmr.scripts.run import main as run_main
from .testutils import CmrLogTester, capture_stdout, ls_dir

GC_PIPELINE = """\
[pipeline]
version = 1

[source]
kind = text_file
location = %(corpus)s
partitions = 3

[stage 1]
op = map
image = busybox
input = TextFile:/dna
output = TextFile:/count
command = grep -o '[GC]' /dna | wc -l > /count

[stage 2]
op = reduce
image = busybox
input = TextFile:/counts
output = TextFile:/sum
depth = 2
command = awk '{s+=$1} END {print s}' /counts > /sum

[sink]
kind = text
path = %(sink)s
"""

FAILING_STAGE = """\
[stage 2]
op = map
image = busybox
input = TextFile:/in
output = TextFile:/out
command = if [ "$CMR_PARTITION" = 1 ]; then echo bad partition >&2; exit 3; fi
    cp /in /out
"""


def lineno(text, needle):
    """Line number of the first line containing I{needle}"""
    for num, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return num
    raise AssertionError("'%s' not in text" % needle)


class TestEscapes(unittest.TestCase):
    def test_all_bytes(self):
        value = bytes(bytearray(range(256)))
        spelled = escape(value)
        self.assertEqual(unescape(spelled), value)
        self.assertNotIn(' ', spelled)
        self.assertNotIn('\n', spelled)

    def test_sdf_separator(self):
        self.assertEqual(unescape('\\n$$$$\\n'), SDF_SEPARATOR)

    def test_invalid(self):
        self.assertRaises(ValueError, unescape, '\\x4')
        self.assertRaises(ValueError, unescape, 'trailing\\')


class TestKeyRule(unittest.TestCase):
    def test_field_out_of_range(self):
        key_fn = KeyRule(FIELD_DELIMITED, delimiter=b',', field=3).key_function()
        self.assertRaises(IndexError, key_fn, b'a,b')

    def test_regex_without_group(self):
        key_fn = KeyRule(REGEX_CAPTURE, pattern='chr[0-9]+').key_function()
        self.assertEqual(key_fn(b'x chr12 y'), b'chr12')
        self.assertRaises(ValueError, key_fn, b'nothing')


class TestParse(unittest.TestCase):
    def gc_text(self, **kwargs):
        values = {'corpus': 'dna.txt', 'sink': 'gc.txt'}
        values.update(kwargs)
        return GC_PIPELINE % values

    def assertProblem(self, text, needle, regex):
        with self.assertRaises(PipelineValidationError) as ctx:
            parse_pipeline_text(text, 'test.pipeline')
        lines = ctx.exception.format_problems()
        expected = 'test.pipeline:%d: ' % lineno(text, needle)
        matching = [line for line in lines if line.startswith(expected)]
        self.assertTrue(matching, "no problem at %s in %s" % (expected, lines))
        self.assertRegex(matching[0], regex)
        self.assertEqual(ctx.exception.exit_code, 2)
        return ctx.exception

    def test_gc(self):
        spec = parse_pipeline_text(self.gc_text())
        self.assertEqual(spec.source, Source('text_file', 'dna.txt'))
        self.assertEqual(spec.partitions, 3)
        self.assertEqual([s.op for s in spec.stages], [MAP, REDUCE])
        self.assertEqual(spec.stages[0].stage.input_mp, MountPoint.text_file('/dna'))
        self.assertEqual(spec.stages[1].depth_k, 2)
        self.assertEqual(spec.stages[1].stage.command,
                         "awk '{s+=$1} END {print s}' /counts > /sum")
        self.assertEqual(spec.sink, SinkSpec('text', 'gc.txt'))

    def test_unknown_op(self):
        text = self.gc_text().replace('op = map', 'op = mapp')
        self.assertProblem(text, 'op = mapp', "unknown op 'mapp'")

    def test_depth_zero(self):
        text = self.gc_text().replace('depth = 2', 'depth = 0')
        self.assertProblem(text, 'depth = 0', "'depth' must be at least 1")

    def test_all_problems_reported(self):
        text = self.gc_text().replace('image = busybox\ninput = TextFile:/dna\n',
                                      'input = TextFile:/dna\ncolour = blue\n')
        text = text.replace('kind = text\n', 'kind = parquet\n')
        text = text.replace('output = TextFile:/sum', 'output = Socket:/sum')
        with self.assertRaises(PipelineValidationError) as ctx:
            parse_pipeline_text(text, 'test.pipeline')
        messages = '\n'.join(ctx.exception.format_problems())
        self.assertIn("[stage 1] is missing 'image'", messages)
        self.assertIn("unknown key 'colour'", messages)
        self.assertIn("unknown sink kind 'parquet'", messages)
        self.assertIn("'output' must be TextFile:<path> or BinaryFiles:<path>", messages)
        self.assertIn("test.pipeline:%d:" % lineno(text, 'colour'), messages)

    def test_duplicate_mount(self):
        text = self.gc_text().replace('output = TextFile:/count', 'output = TextFile:/dna')
        self.assertProblem(text, 'output = TextFile:/dna', 'duplicate mount path /dna')

    def test_stage_numbers(self):
        text = self.gc_text().replace('[stage 2]', '[stage 3]')
        self.assertProblem(text, '[stage 1]', 'stages must be numbered 1..2')

    def test_missing_sections(self):
        with self.assertRaises(PipelineValidationError) as ctx:
            parse_pipeline_text("[pipeline]\nversion = 1\n", 'empty.pipeline')
        messages = ctx.exception.format_problems()
        self.assertIn("empty.pipeline: missing [source] section", messages)
        self.assertIn("empty.pipeline: missing [sink] section", messages)

    def test_version(self):
        text = self.gc_text().replace('version = 1', 'version = 2')
        self.assertProblem(text, 'version = 2', 'unsupported pipeline version')

    def test_bad_separator(self):
        text = self.gc_text().replace('partitions = 3', 'separator = \\q')
        self.assertProblem(text, 'separator = ', 'invalid escape')

    def test_syntax_error(self):
        with self.assertRaises(PipelineValidationError) as ctx:
            parse_pipeline_text("no section header\n", 'broken.pipeline')
        self.assertEqual(len(ctx.exception.problems), 1)

    def test_repartition(self):
        text = self.gc_text().replace(
            "[stage 2]", "[stage 2]\nop = repartition_by\npartitions = 4\n"
            "key-kind = field_delimited\nkey-delimiter = \\t\nkey-field = 1\n\n[stage 3]")
        spec = parse_pipeline_text(text)
        stage = spec.stages[1]
        self.assertEqual((stage.op, stage.num_partitions), (REPARTITION_BY, 4))
        self.assertEqual(stage.key, KeyRule(FIELD_DELIMITED, delimiter=b'\t', field=1))

    def test_repartition_wrong_key_params(self):
        text = self.gc_text().replace(
            "[stage 2]", "[stage 2]\nop = repartition_by\npartitions = 4\n"
            "key-kind = prefix_bytes\nkey-field = 1\n\n[stage 3]")
        self.assertProblem(text, 'key-kind = prefix_bytes', "prefix_bytes doesn.t take field")

    def test_file(self):
        tmpdir = context.new_tmpdir(__name__)
        try:
            path = tmpdir.join('gc.pipeline')
            with open(path, 'w') as f:
                f.write(self.gc_text())
            self.assertEqual(parse_pipeline(path), parse_pipeline_text(self.gc_text()))
            self.assertRaises(CmrIOError, parse_pipeline, tmpdir.join('missing.pipeline'))
        finally:
            context.teardown()


class TestEmit(unittest.TestCase):
    def assertRoundTrip(self, spec):
        text = emit_pipeline(spec)
        self.assertEqual(parse_pipeline_text(text), spec)
        self.assertEqual(emit_pipeline(parse_pipeline_text(text)), text)

    def test_gc(self):
        self.assertRoundTrip(parse_pipeline_text(GC_PIPELINE % {'corpus': 'dna.txt',
                                                                'sink': 'gc.txt'}))

    def test_sdf_and_multiline_command(self):
        stage = StageSpec(MountPoint.text_file('/in.sdf', SDF_SEPARATOR),
                          MountPoint.binary_files('/out'), 'rdkit:latest',
                          "for f in a b; do\necho $f > /out/$f\ndone")
        spec = PipelineSpec(Source('text_file', 'mols.sdf', SDF_SEPARATOR),
                            [StageDef(MAP, stage)], SinkSpec('text', 'out.txt', b' \t'),
                            partitions=8)
        self.assertRoundTrip(spec)

    def test_repartition_and_binary(self):
        spec = PipelineSpec(
            Source(OBJECT_PREFIX, 'runs/', store_root='/data/store'),
            [StageDef(REPARTITION_BY, key=KeyRule(FIELD_DELIMITED, delimiter=b';', field=0),
                      num_partitions=3),
             StageDef(REPARTITION_BY, key=KeyRule(PREFIX_BYTES, prefix=4), num_partitions=2),
             StageDef(REPARTITION_BY, key=KeyRule(REGEX_CAPTURE, pattern='^(chr\\w+)'),
                      num_partitions=5)],
            SinkSpec(SINK_BINARY, 'out'))
        self.assertRoundTrip(spec)

    def test_binary_source(self):
        stage = StageSpec(MountPoint.binary_files('/in'), MountPoint.text_file('/out'),
                          'busybox', 'ls /in > /out')
        spec = PipelineSpec(Source(BINARY_DIR, 'images'),
                            [StageDef(REDUCE, stage, depth_k=3)], SinkSpec('text', 'n.txt'))
        self.assertRoundTrip(spec)


class TestRunPipeline(unittest.TestCase, CmrLogTester):
    def __init__(self, methodName='runTest'):
        unittest.TestCase.__init__(self, methodName)
        CmrLogTester.__init__(self)

    def setUp(self):
        self.tmpdir = context.new_tmpdir(__name__)
        self.corpus = self.tmpdir.join('dna.txt')
        with open(self.corpus, 'wb') as f:
            f.write(b'GGAA\nCCCC\nATAT\nGCGC\nTTTT\nGAGA\n')
        self.sink = self.tmpdir.join('gc.txt')
        self.report = self.tmpdir.join('report.json')
        self.temp = self.tmpdir.join('temp')
        os.makedirs(self.temp)
        self._capture_log(True)

    def tearDown(self):
        self._capture_log(False)
        context.teardown()

    def config(self, **kwargs):
        values = dict(executor='subprocess', workers=2, slots=2, temp_root=self.temp,
                      report=self.report, retries=0)
        values.update(kwargs)
        return RunConfig(**values)

    def text(self):
        return GC_PIPELINE % {'corpus': self.corpus, 'sink': self.sink}

    def read_report(self):
        with open(self.report) as f:
            return json.load(f)

    def test_gc(self):
        exit_code, report = run_pipeline(parse_pipeline_text(self.text()), self.config())
        self.assertEqual(exit_code, 0)
        with open(self.sink) as f:
            self.assertEqual(f.read(), '12\n')
        self.assertEqual(self.read_report(), report)
        self.assertEqual(report['status'], 'ok')
        self.assertEqual(report['backend'], 'subprocess')
        self.assertEqual((report['records_in'], report['records_out']), (6, 1))
        ops = [(row['op'], row['stage']) for row in report['ledger']['operations']]
        self.assertEqual(ops, [('map', 1), ('reduce', 2)])
        self.assertEqual(report['ledger']['operations'][0]['tasks'], 3)
        self.assertEqual(ls_dir(self.temp), set())

    def test_report_counts_on_eight_partitions(self):
        """The JSON report shows shuffle free maps and one merge per level"""
        lines = [b'GGAA', b'CCCC', b'ATAT', b'GCGC'] * 4
        with open(self.corpus, 'wb') as f:
            f.write(b'\n'.join(lines) + b'\n')
        for depth in (2, 3):
            text = self.text().replace('partitions = 3', 'partitions = 8')
            text = text.replace('depth = 2', 'depth = %d' % depth)
            exit_code, _ = run_pipeline(parse_pipeline_text(text), self.config())
            self.assertEqual(exit_code, 0)
            with open(self.sink) as f:
                self.assertEqual(f.read(), '40\n')
            rows = self.read_report()['ledger']['operations']
            self.assertEqual([row['op'] for row in rows], ['map', 'reduce'])
            self.assertEqual(rows[0]['tasks'], 8)
            self.assertEqual(rows[0]['bytes_shuffled'], 0)
            self.assertEqual(rows[1]['merge_events'], depth)

    def test_task_failure(self):
        text = self.text()
        start = text.index('[stage 2]')
        end = text.index('[sink]')
        text = text[:start] + FAILING_STAGE + '\n' + text[end:]
        exit_code, report = run_pipeline(parse_pipeline_text(text), self.config())
        self.assertEqual(exit_code, 3)
        self.assertFalse(os.path.exists(self.sink))
        report = self.read_report()
        self.assertEqual(report['status'], 'failed')
        error = report['error']
        self.assertEqual(error['type'], 'LevelFailed')
        self.assertEqual((error['stage'], error['partition'], error['exit_code']), (2, 1, 3))
        self.assertEqual(error['stderr'], 'bad partition\n')
        self.assertEqual(error['failures'][0]['label'], 'stage 2 map partition 1')
        ops = [(row['op'], row['stage']) for row in report['ledger']['operations']]
        self.assertEqual(ops, [('map', 1), ('map', 2)])
        self.assertEqual(ls_dir(self.temp), set())
        self._check_in_log("cmr:error: stage 2 map partition 1 exited with 3")

    def test_dangling_output_link(self):
        """A task leaving a broken link as its output fails cleanly"""
        text = self.text()
        start = text.index('[stage 2]')
        end = text.index('[sink]')
        stage = ("[stage 2]\nop = map\nimage = busybox\ninput = TextFile:/in\n"
                 "output = TextFile:/out\ncommand = rm -f /out; ln -s /nonexistent/x /out\n\n")
        text = text[:start] + stage + text[end:]
        exit_code, report = run_pipeline(parse_pipeline_text(text), self.config(retries=1))
        self.assertEqual(exit_code, 3)
        report = self.read_report()
        self.assertEqual(report['status'], 'failed')
        self.assertEqual(report['error']['type'], 'LevelFailed')
        self.assertEqual(report['error']['stage'], 2)
        self.assertEqual(set(f['type'] for f in report['error']['failures']),
                         set(['TaskOutputError']))
        self.assertFalse(os.path.exists(self.sink))
        self.assertEqual(ls_dir(self.temp), set())

    def test_missing_source(self):
        os.unlink(self.corpus)
        exit_code, report = run_pipeline(parse_pipeline_text(self.text()), self.config())
        self.assertEqual(exit_code, 4)
        self.assertEqual(report['error']['type'], 'CmrIOError')

    def test_report_not_writable(self):
        config = self.config(report=self.tmpdir.join('missing', 'report.json'))
        exit_code, report = run_pipeline(parse_pipeline_text(self.text()), config)
        self.assertEqual(exit_code, 4)
        self.assertTrue(os.path.exists(self.sink))

    @mock.patch.object(DockerBackend, 'available', return_value=False)
    def test_container_engine_unavailable(self, available):
        exit_code, report = run_pipeline(parse_pipeline_text(self.text()),
                                         self.config(executor='container'))
        self.assertEqual(exit_code, 3)
        self.assertEqual(report['error']['type'], 'BackendUnavailable')
        self.assertEqual(report['error']['class'], 'environment')

    def test_invalid_config(self):
        exit_code, report = run_pipeline(parse_pipeline_text(self.text()),
                                         self.config(workers=0))
        self.assertEqual(exit_code, 2)
        self.assertNotIn('ledger', report)

    def test_run_command(self):
        path = self.tmpdir.join('gc.pipeline')
        with open(path, 'w') as f:
            f.write(self.text())
        with capture_stdout() as out:
            ret = run_main(['run', '--executor=subprocess', '--workers=2', '--slots=1',
                            '--temp-root=%s' % self.temp, '--show-ledger', path])
        self.assertEqual(ret, 0)
        self.assertIn('total', out.output())
        with open(self.sink) as f:
            self.assertEqual(f.read(), '12\n')

    def test_run_command_bad_color_scheme(self):
        path = self.tmpdir.join('gc.pipeline')
        with open(path, 'w') as f:
            f.write(self.text())
        ret = run_main(['run', '--executor=subprocess', '--color-scheme=red', path])
        self.assertEqual(ret, 2)
        self._check_log(0, "cmr:error: color scheme needs 4 ':' separated fields")
        self.assertFalse(os.path.exists(self.sink))

    def test_run_command_invalid_pipeline(self):
        path = self.tmpdir.join('bad.pipeline')
        with open(path, 'w') as f:
            f.write(self.text().replace('op = map', 'op = mapp'))
        ret = run_main(['run', '--executor=subprocess', path])
        self.assertEqual(ret, 2)
        self._check_log(0, "cmr:error: .*bad.pipeline:%d: unknown op 'mapp'"
                        % lineno(self.text(), 'op = map'))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
