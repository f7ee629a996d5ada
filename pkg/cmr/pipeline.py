# vim: set fileencoding=utf-8 :
#
# (C) 2026 The cmr developers
#    This program is free software; you can redistribute it and/or modify
#    it under the terms of the GNU General Public License as published by
#    the Free Software Foundation; either version 2 of the License, or
#    (at your option) any later version.
#
#    This program is distributed in the hope that it will be useful,
#    but WITHOUT ANY WARRANTY; without even the implied warranty of
#    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#    GNU General Public License for more details.
#
#    You should have received a copy of the GNU General Public License
#    along with this program; if not, please see
#    <http://www.gnu.org/licenses/>
"""
Pipeline files and running them

A pipeline file is an ini style document::

    [pipeline]
    version = 1

    [source]
    kind = text_file
    location = dna.txt

    [stage 1]
    op = map
    image = ubuntu
    input = TextFile:/dna
    output = TextFile:/count
    command = grep -o '[GC]' /dna | wc -l > /count

    [stage 2]
    op = reduce
    image = ubuntu
    input = TextFile:/counts
    output = TextFile:/sum
    command = awk '{s+=$1} END {print s}' /counts > /sum

    [sink]
    kind = text
    path = gc.txt

Separators use backslash escapes (C{\\n}, C{\\t}, C{\\xNN}, C{\\\\}).
Relative paths are relative to the current directory.
"""

import re
import time

from six.moves import configparser

import cmr.log
from cmr.dataset import DEFAULT_SEPARATOR
from cmr.engine import DEFAULT_DEPTH, Engine, ReduceConfig, StageSpec
from cmr.errors import (EXIT_IO, EXIT_OK, BackendUnavailable, CmrError, CmrIOError,
                        ConfigurationError, LevelFailed, PipelineValidationError)
from cmr.executor import get_backend
from cmr.ingest import KINDS as SOURCE_KINDS, OBJECT_PREFIX, Source, ingest
from cmr.ledger import ShuffleLedger, ledger_report, write_report
from cmr.mountpoint import BINARY_FILES, TEXT_FILE, MountPoint
from cmr.scheduler import WorkerPool
from cmr.tmpfile import TempSpace

VERSION = 1

MAP = 'map'
REDUCE = 'reduce'
REPARTITION_BY = 'repartition_by'
OPS = (MAP, REDUCE, REPARTITION_BY)

FIELD_DELIMITED = 'field_delimited'
PREFIX_BYTES = 'prefix_bytes'
REGEX_CAPTURE = 'regex_capture'
KEY_KINDS = (FIELD_DELIMITED, PREFIX_BYTES, REGEX_CAPTURE)

SINK_TEXT = 'text'
SINK_BINARY = 'binary'
SINK_KINDS = (SINK_TEXT, SINK_BINARY)

_ESCAPES = {b'\\': '\\\\', b'\n': '\\n', b'\t': '\\t', b'\r': '\\r', b' ': '\\x20'}
_UNESCAPES = {'\\': b'\\', 'n': b'\n', 't': b'\t', 'r': b'\r'}


def escape(value):
    """
    Spell a byte string for a pipeline file

    >>> escape(b'\\n$$$$\\n')
    '\\\\n$$$$\\\\n'
    >>> escape(b'a b\\x00')
    'a\\\\x20b\\\\x00'
    """
    out = []
    for byte in bytearray(value):
        char = bytes(bytearray([byte]))
        if char in _ESCAPES:
            out.append(_ESCAPES[char])
        elif 0x21 <= byte < 0x7f:
            out.append(chr(byte))
        else:
            out.append('\\x%02x' % byte)
    return ''.join(out)


def unescape(value):
    """
    Turn a pipeline file spelling back into bytes

    >>> unescape('\\\\n$$$$\\\\n')
    b'\\n$$$$\\n'
    >>> unescape('\\\\q')
    Traceback (most recent call last):
    ...
    ValueError: invalid escape '\\q'
    """
    out = []
    idx = 0
    while idx < len(value):
        char = value[idx]
        if char != '\\':
            out.append(char.encode('utf-8'))
            idx += 1
            continue
        nxt = value[idx + 1:idx + 2]
        if nxt in _UNESCAPES:
            out.append(_UNESCAPES[nxt])
            idx += 2
        elif nxt == 'x' and re.match(r'[0-9a-fA-F]{2}$', value[idx + 2:idx + 4]):
            out.append(bytes(bytearray([int(value[idx + 2:idx + 4], 16)])))
            idx += 4
        else:
            raise ValueError("invalid escape '\\%s'" % nxt)
    return b''.join(out)


class KeyRule(object):
    """
    How repartition_by gets the key of a record

    >>> rule = KeyRule(FIELD_DELIMITED, delimiter=b'\\t', field=1)
    >>> rule.key_function()(b'r1\\tchr2\\t100')
    b'chr2'
    >>> KeyRule(PREFIX_BYTES, prefix=4).key_function()(b'chr1:100')
    b'chr1'
    >>> KeyRule(REGEX_CAPTURE, pattern='^(chr[0-9XY]+)').key_function()(b'chr7 x')
    b'chr7'
    >>> KeyRule(PREFIX_BYTES, prefix=4, field=1)
    Traceback (most recent call last):
    ...
    cmr.errors.ConfigurationError: key rule prefix_bytes doesn't take field
    """
    _params = {FIELD_DELIMITED: ('delimiter', 'field'),
               PREFIX_BYTES: ('prefix',),
               REGEX_CAPTURE: ('pattern',)}

    def __init__(self, kind, delimiter=None, field=None, prefix=None, pattern=None):
        if kind not in KEY_KINDS:
            raise ConfigurationError("Unknown key rule '%s', use one of %s"
                                     % (kind, ", ".join(KEY_KINDS)))
        self.kind = kind
        self.delimiter = delimiter
        self.field = field
        self.prefix = prefix
        self.pattern = pattern
        for name in ('delimiter', 'field', 'prefix', 'pattern'):
            given = getattr(self, name) is not None
            if name in self._params[kind] and not given:
                raise ConfigurationError("key rule %s needs %s" % (kind, name))
            if name not in self._params[kind] and given:
                raise ConfigurationError("key rule %s doesn't take %s" % (kind, name))
        if kind == FIELD_DELIMITED:
            if not delimiter:
                raise ConfigurationError("Key delimiter must not be empty")
            if field < 0:
                raise ConfigurationError("Key field must not be negative, got %d" % field)
        elif kind == PREFIX_BYTES and prefix < 1:
            raise ConfigurationError("Key prefix must be positive, got %d" % prefix)
        elif kind == REGEX_CAPTURE:
            try:
                self._regex = re.compile(pattern.encode('utf-8'))
            except re.error as err:
                raise ConfigurationError("Invalid key pattern '%s': %s" % (pattern, err))

    def key_function(self):
        if self.kind == FIELD_DELIMITED:
            delimiter, field = self.delimiter, self.field
            return lambda record: record.split(delimiter)[field]
        elif self.kind == PREFIX_BYTES:
            prefix = self.prefix
            return lambda record: record[:prefix]
        regex = self._regex

        def capture(record):
            match = regex.search(record)
            if match is None:
                raise ValueError("pattern '%s' doesn't match" % regex.pattern.decode('utf-8'))
            return match.group(1) if regex.groups else match.group(0)
        return capture

    def __eq__(self, other):
        if not isinstance(other, KeyRule):
            return NotImplemented
        return (self.kind, self.delimiter, self.field, self.prefix, self.pattern) == \
               (other.kind, other.delimiter, other.field, other.prefix, other.pattern)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<KeyRule %s>" % self.kind


class StageDef(object):
    """
    One step of a pipeline

    @ivar op: one of L{OPS}
    @ivar stage: what map and reduce run
    @type stage: L{StageSpec}
    @ivar depth_k: reduce depth, C{None} for the configured default
    @ivar key: key rule of repartition_by
    @type key: L{KeyRule}
    @ivar num_partitions: partitions repartition_by produces
    """
    def __init__(self, op, stage=None, depth_k=None, key=None, num_partitions=None):
        self.op = op
        self.stage = stage
        self.depth_k = depth_k
        self.key = key
        self.num_partitions = num_partitions

    def __eq__(self, other):
        if not isinstance(other, StageDef):
            return NotImplemented
        return (self.op, self.stage, self.depth_k, self.key, self.num_partitions) == \
               (other.op, other.stage, other.depth_k, other.key, other.num_partitions)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<StageDef %s>" % self.op


class SinkSpec(object):
    def __init__(self, kind, path, separator=DEFAULT_SEPARATOR):
        if kind not in SINK_KINDS:
            raise ConfigurationError("Unknown sink kind '%s', use one of %s"
                                     % (kind, ", ".join(SINK_KINDS)))
        self.kind = kind
        self.path = path
        self.separator = separator if kind == SINK_TEXT else None

    def __eq__(self, other):
        if not isinstance(other, SinkSpec):
            return NotImplemented
        return (self.kind, self.path, self.separator) == \
               (other.kind, other.path, other.separator)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<SinkSpec %s '%s'>" % (self.kind, self.path)


class PipelineSpec(object):
    """
    A source, the stages run on it and where the result goes

    @ivar partitions: partitions at ingestion, 0 for one per slot
    """
    def __init__(self, source, stages, sink, partitions=0):
        self.source = source
        self.stages = list(stages)
        self.sink = sink
        self.partitions = partitions

    def __eq__(self, other):
        if not isinstance(other, PipelineSpec):
            return NotImplemented
        return (self.source, self.stages, self.sink, self.partitions) == \
               (other.source, other.stages, other.sink, other.partitions)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<PipelineSpec %d stages>" % len(self.stages)


def _line_index(text):
    """
    Line numbers of section headers and their keys

    >>> idx = _line_index("[a]\\nx = 1\\n  more\\n[b]\\ny: 2\\n")
    >>> idx[('a', None)], idx[('a', 'x')], idx[('b', 'y')]
    (1, 2, 5)
    """
    index = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), 1):
        header = re.match(r'\[([^\]]+)\]\s*$', line)
        if header:
            section = header.group(1).strip()
            index.setdefault((section, None), lineno)
            continue
        if section is None or not line or line[0].isspace() or line[0] in '#;':
            continue
        key = re.match(r'([^=:]+?)\s*[=:]', line)
        if key:
            index.setdefault((section, key.group(1).strip().lower()), lineno)
    return index


class _Validator(object):
    """Collects the problems of a pipeline file instead of stopping at the first"""
    def __init__(self, parser, index):
        self.parser = parser
        self.index = index
        self.problems = []

    def line(self, section, key=None):
        return self.index.get((section, key), self.index.get((section, None)))

    def problem(self, section, key, msg):
        self.problems.append((self.line(section, key) if section else None, msg))

    def get(self, section, key, required=True):
        if self.parser.has_option(section, key):
            return self.parser.get(section, key)
        if required:
            self.problem(section, None, "[%s] is missing '%s'" % (section, key))
        return None

    def get_int(self, section, key, minimum, required=True):
        value = self.get(section, key, required)
        if value is None:
            return None
        try:
            number = int(value)
        except ValueError:
            self.problem(section, key, "'%s' must be an integer, got '%s'" % (key, value))
            return None
        if number < minimum:
            self.problem(section, key, "'%s' must be at least %d, got %d" % (key, minimum, number))
            return None
        return number

    def get_separator(self, section, key):
        value = self.get(section, key, required=False)
        if value is None:
            return DEFAULT_SEPARATOR
        try:
            sep = unescape(value)
        except ValueError as err:
            self.problem(section, key, "'%s': %s" % (key, err))
            return None
        if not sep:
            self.problem(section, key, "'%s' must not be empty" % key)
            return None
        return sep

    def check_keys(self, section, allowed):
        for key in self.parser.options(section):
            if key not in allowed:
                self.problem(section, key, "unknown key '%s' in [%s]" % (key, section))

    def wrap(self, section, key, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigurationError as err:
            self.problem(section, key, str(err))
            return None


def _mount(validator, section, key):
    value = validator.get(section, key)
    if value is None:
        return None
    kind, _, path = value.partition(':')
    if kind not in (TEXT_FILE, BINARY_FILES) or not path:
        validator.problem(section, key, "'%s' must be TextFile:<path> or BinaryFiles:<path>, "
                          "got '%s'" % (key, value))
        return None
    sep = validator.get_separator(section, '%s-separator' % key)
    if sep is None:
        return None
    return validator.wrap(section, key, MountPoint, kind, path, sep)


_SOURCE_KEYS = ('kind', 'location', 'separator', 'partitions', 'store')
_STAGE_KEYS = {MAP: ('op', 'image', 'input', 'input-separator', 'output',
                     'output-separator', 'command'),
               REPARTITION_BY: ('op', 'partitions', 'key-kind', 'key-delimiter',
                                'key-field', 'key-prefix', 'key-pattern')}
_STAGE_KEYS[REDUCE] = _STAGE_KEYS[MAP] + ('depth',)
_SINK_KEYS = ('kind', 'path', 'separator')


def _parse_source(v):
    if not v.parser.has_section('source'):
        v.problem(None, None, "missing [source] section")
        return None, 0
    v.check_keys('source', _SOURCE_KEYS)
    kind = v.get('source', 'kind')
    if kind is not None and kind not in SOURCE_KINDS:
        v.problem('source', 'kind', "unknown source kind '%s', use one of %s"
                  % (kind, ", ".join(SOURCE_KINDS)))
        kind = None
    location = v.get('source', 'location', required=kind != OBJECT_PREFIX)
    sep = v.get_separator('source', 'separator')
    partitions = v.get_int('source', 'partitions', 0, required=False) or 0
    store = v.get('source', 'store', required=False)
    if kind is None or sep is None:
        return None, partitions
    return v.wrap('source', None, Source, kind, location or '', sep, store), partitions


def _parse_key(v, section):
    kind = v.get(section, 'key-kind')
    if kind is None:
        return None
    if kind not in KEY_KINDS:
        v.problem(section, 'key-kind', "unknown key kind '%s', use one of %s"
                  % (kind, ", ".join(KEY_KINDS)))
        return None
    kwargs = {}
    if v.parser.has_option(section, 'key-delimiter'):
        kwargs['delimiter'] = v.get_separator(section, 'key-delimiter')
        if kwargs['delimiter'] is None:
            return None
    for key, name, minimum in (('key-field', 'field', 0), ('key-prefix', 'prefix', 1)):
        if v.parser.has_option(section, key):
            kwargs[name] = v.get_int(section, key, minimum)
            if kwargs[name] is None:
                return None
    if v.parser.has_option(section, 'key-pattern'):
        kwargs['pattern'] = v.get(section, 'key-pattern')
    return v.wrap(section, 'key-kind', KeyRule, kind, **kwargs)


def _parse_stage(v, section):
    op = v.get(section, 'op')
    if op is None:
        return None
    if op not in OPS:
        v.problem(section, 'op', "unknown op '%s' in [%s], use one of %s"
                  % (op, section, ", ".join(OPS)))
        return None
    v.check_keys(section, _STAGE_KEYS[op])
    if op == REPARTITION_BY:
        partitions = v.get_int(section, 'partitions', 1)
        key = _parse_key(v, section)
        if partitions is None or key is None:
            return None
        return StageDef(op, key=key, num_partitions=partitions)

    image = v.get(section, 'image')
    if image is not None and not image.strip():
        v.problem(section, 'image', "'image' must not be empty")
    command = v.get(section, 'command')
    input_mp = _mount(v, section, 'input')
    output_mp = _mount(v, section, 'output')
    depth = v.get_int(section, 'depth', 1, required=False) if op == REDUCE else None
    if op == REDUCE and v.parser.has_option(section, 'depth') and depth is None:
        return None
    if None in (image, command, input_mp, output_mp):
        return None
    if input_mp.container_path == output_mp.container_path:
        v.problem(section, 'output', "duplicate mount path %s in [%s]"
                  % (input_mp.container_path, section))
        return None
    stage = v.wrap(section, 'command', StageSpec, input_mp, output_mp, image, command)
    if stage is None:
        return None
    return StageDef(op, stage=stage, depth_k=depth)


def _parse_sink(v):
    if not v.parser.has_section('sink'):
        v.problem(None, None, "missing [sink] section")
        return None
    v.check_keys('sink', _SINK_KEYS)
    kind = v.get('sink', 'kind')
    path = v.get('sink', 'path')
    if kind is not None and kind not in SINK_KINDS:
        v.problem('sink', 'kind', "unknown sink kind '%s', use one of %s"
                  % (kind, ", ".join(SINK_KINDS)))
        return None
    sep = v.get_separator('sink', 'separator')
    if None in (kind, path, sep):
        return None
    return SinkSpec(kind, path, sep)


def parse_pipeline_text(text, filename='<pipeline>'):
    """
    Parse and validate a pipeline document

    @returns: the pipeline
    @rtype: L{PipelineSpec}
    @raises PipelineValidationError: with all problems found
    """
    parser = configparser.RawConfigParser()
    try:
        parser.read_string(text, source=filename)
    except configparser.Error as err:
        raise PipelineValidationError(filename, [(getattr(err, 'lineno', None),
                                                  err.message.splitlines()[0])])
    v = _Validator(parser, _line_index(text))

    if not parser.has_section('pipeline'):
        v.problem(None, None, "missing [pipeline] section")
    else:
        v.check_keys('pipeline', ('version',))
        version = v.get('pipeline', 'version')
        if version is not None and version.strip() != str(VERSION):
            v.problem('pipeline', 'version', "unsupported pipeline version '%s', "
                      "expected %d" % (version, VERSION))

    source, partitions = _parse_source(v)

    numbered = []
    for section in parser.sections():
        match = re.match(r'stage\s+(\d+)$', section)
        if match:
            numbered.append((int(match.group(1)), section))
        elif section not in ('pipeline', 'source', 'sink'):
            v.problem(section, None, "unknown section [%s]" % section)
    numbered.sort()
    if not numbered:
        v.problem(None, None, "a pipeline needs at least one [stage N] section")
    elif [n for n, _ in numbered] != list(range(1, len(numbered) + 1)):
        v.problem(numbered[0][1], None, "stages must be numbered 1..%d, got %s"
                  % (len(numbered), ", ".join(str(n) for n, _ in numbered)))
    stages = [_parse_stage(v, section) for _, section in numbered]

    sink = _parse_sink(v)

    if v.problems:
        raise PipelineValidationError(filename, v.problems)
    return PipelineSpec(source, stages, sink, partitions)


def parse_pipeline(path):
    """
    Read a pipeline file

    @raises CmrIOError: file can't be read
    @raises PipelineValidationError: with all problems found
    """
    try:
        with open(path, 'rb') as f:
            text = f.read().decode('utf-8')
    except (IOError, OSError) as err:
        raise CmrIOError("Can't read pipeline file '%s': %s" % (path, err))
    except UnicodeDecodeError as err:
        raise PipelineValidationError(path, [(None, "not UTF-8: %s" % err)])
    return parse_pipeline_text(text, path)


def _multiline(value):
    lines = value.splitlines() or ['']
    return '\n    '.join(lines)


def _mount_lines(key, mp):
    lines = ["%s = %s:%s" % (key, mp.kind, mp.container_path)]
    if mp.is_text:
        lines.append("%s-separator = %s" % (key, escape(mp.separator)))
    return lines


def emit_pipeline(spec):
    """
    The canonical text of a pipeline, parsing it gives back I{spec}

    @type spec: L{PipelineSpec}
    @rtype: C{str}
    """
    out = ["[pipeline]", "version = %d" % VERSION, "",
           "[source]", "kind = %s" % spec.source.kind,
           "location = %s" % spec.source.location,
           "separator = %s" % escape(spec.source.separator)]
    if spec.partitions:
        out.append("partitions = %d" % spec.partitions)
    if spec.source.store_root is not None:
        out.append("store = %s" % spec.source.store_root)
    for idx, stage in enumerate(spec.stages, 1):
        out += ["", "[stage %d]" % idx, "op = %s" % stage.op]
        if stage.op == REPARTITION_BY:
            key = stage.key
            out.append("partitions = %d" % stage.num_partitions)
            out.append("key-kind = %s" % key.kind)
            if key.kind == FIELD_DELIMITED:
                out.append("key-delimiter = %s" % escape(key.delimiter))
                out.append("key-field = %d" % key.field)
            elif key.kind == PREFIX_BYTES:
                out.append("key-prefix = %d" % key.prefix)
            else:
                out.append("key-pattern = %s" % key.pattern)
            continue
        out.append("image = %s" % stage.stage.image)
        out += _mount_lines('input', stage.stage.input_mp)
        out += _mount_lines('output', stage.stage.output_mp)
        if stage.depth_k is not None:
            out.append("depth = %d" % stage.depth_k)
        out.append("command = %s" % _multiline(stage.stage.command))
    out += ["", "[sink]", "kind = %s" % spec.sink.kind, "path = %s" % spec.sink.path]
    if spec.sink.kind == SINK_TEXT:
        out.append("separator = %s" % escape(spec.sink.separator))
    return '\n'.join(out) + '\n'


class RunConfig(object):
    """
    How to run a pipeline, the library side of the command line options
    """
    def __init__(self, executor='auto', transport='cli', pull_policy='if-not-present',
                 timeout=0, retries=1, workers=1, slots=1, temp_root=None,
                 temp_backing='disk', keep_temp=False, partitions=0,
                 depth=DEFAULT_DEPTH, report=None):
        self.executor = executor
        self.transport = transport
        self.pull_policy = pull_policy
        self.timeout = timeout
        self.retries = retries
        self.workers = workers
        self.slots = slots
        self.temp_root = temp_root
        self.temp_backing = temp_backing
        self.keep_temp = keep_temp
        self.partitions = partitions
        self.depth = depth
        self.report = report

    @classmethod
    def from_options(klass, options):
        return klass(executor=options.executor, transport=options.transport,
                     pull_policy=options.pull_policy, timeout=options.timeout,
                     retries=options.retries, workers=options.workers,
                     slots=options.slots, temp_root=options.temp_root,
                     temp_backing=options.temp_backing, keep_temp=options.keep_temp,
                     partitions=options.partitions, depth=options.depth,
                     report=options.report or None)


def build_engine(config, backend=None):
    """Set up an engine the way I{config} says"""
    if config.retries < 0:
        raise ConfigurationError("Retries must not be negative, got %d" % config.retries)
    if config.timeout < 0:
        raise ConfigurationError("Timeout must not be negative, got %d" % config.timeout)
    pool = WorkerPool.from_config(config.workers, config.slots)
    temp_space = TempSpace(config.temp_root, config.temp_backing, config.keep_temp)
    if backend is None:
        backend = get_backend(config.executor, config.transport, config.pull_policy)
    return Engine(backend, pool, temp_space, ShuffleLedger(),
                  retries=config.retries, timeout=config.timeout)


def execute(engine, spec, ds, depth=DEFAULT_DEPTH):
    """Run the stages of a pipeline on an ingested dataset"""
    for idx, stage in enumerate(spec.stages, 1):
        if stage.op == MAP:
            ds = engine.map(ds, stage.stage, stage_index=idx)
        elif stage.op == REDUCE:
            cfg = ReduceConfig(stage.depth_k if stage.depth_k is not None else depth)
            ds = engine.reduce(ds, stage.stage, cfg, stage_index=idx)
        else:
            ds = engine.repartition_by(ds, stage.key.key_function(),
                                       stage.num_partitions, stage_index=idx)
    return ds


def write_sink(sink, ds):
    if sink.kind == SINK_TEXT:
        Engine.save_text(ds, sink.separator, sink.path)
    else:
        Engine.save_binary(ds, sink.path)


def ingest_partitions(spec, config, pool):
    return spec.partitions or config.partitions or pool.total_slots


def _failure(err):
    detail = {'label': None, 'stage': getattr(err, 'stage', None),
              'partition': getattr(err, 'partition', None),
              'exit_code': getattr(err, 'task_exit_code', None),
              'stderr': getattr(err, 'stderr', None),
              'message': str(err)}
    return detail


def error_report(err):
    """What went wrong, for the JSON report"""
    report = _failure(err)
    report['type'] = err.__class__.__name__
    report['class'] = 'environment' if isinstance(err, BackendUnavailable) else 'pipeline'
    if isinstance(err, LevelFailed):
        report['failures'] = []
        for idx, label, failure in err.failures:
            detail = _failure(failure)
            detail['label'] = label
            detail['type'] = failure.__class__.__name__
            report['failures'].append(detail)
    return report


def run_pipeline(spec, config, backend=None):
    """
    Run a pipeline end to end

    @type spec: L{PipelineSpec}
    @type config: L{RunConfig}
    @param backend: use this backend instead of the configured one
    @returns: exit code and the report, the report is also written to
        I{config.report} if set
    @rtype: C{tuple} of C{int} and C{dict}
    """
    report = {'status': 'ok', 'exit_code': EXIT_OK}
    engine = None
    try:
        engine = build_engine(config, backend)
        report['backend'] = engine.backend.name
        start = time.time()
        ds = ingest(spec.source, ingest_partitions(spec, config, engine.pool))
        report['ingest_time'] = time.time() - start
        report['records_in'] = ds.count()
        start = time.time()
        ds = execute(engine, spec, ds, config.depth)
        report['run_time'] = time.time() - start
        report['records_out'] = ds.count()
        write_sink(spec.sink, ds)
    except CmrError as err:
        report['status'] = 'failed'
        report['exit_code'] = err.exit_code
        report['error'] = error_report(err)
        if isinstance(err, BackendUnavailable):
            cmr.log.err("Environment problem: %s" % err)
        else:
            cmr.log.err(str(err))
    if engine is not None:
        report['ledger'] = ledger_report(engine.ledger)
        if engine.temp_space.live:
            cmr.log.warn("Task directories left behind: %s" % ", ".join(engine.temp_space.live))
    if config.report:
        try:
            write_report(report, config.report)
        except CmrIOError as err:
            cmr.log.err(str(err))
            if report['exit_code'] == EXIT_OK:
                report['exit_code'] = EXIT_IO
    return report['exit_code'], report

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
