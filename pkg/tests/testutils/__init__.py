# vim: set fileencoding=utf-8 :

from .. import context

import functools
import os
import threading
import unittest

import cmr.log
from cmr.dataset import Dataset, Partition
from cmr.errors import TaskFailed
from cmr.executor import Backend, TaskOutcome

from . cmrlogtester import CmrLogTester
from . capture import capture_stderr, capture_stdout

__all__ = ['CmrLogTester', 'capture_stderr', 'capture_stdout', 'FunctionBackend',
           'sum_lines', 'max_lines', 'numbered_dataset', 'ls_dir',
           'container_engine_available', 'skip_without_container_engine',
           'skip_unless_large', 'LARGE_TESTS']

LARGE_TESTS = os.getenv('CMR_LARGE_TESTS') == '1'


class FunctionBackend(Backend):
    """
    Runs tasks as python functions in the calling thread

    I{fn} gets the host paths of the read only bind, the writable bind
    and the task, its return value is the task's exit status.

    @ivar calls: labels of all tasks run, in no particular order
    """
    name = 'function'

    def __init__(self, fn):
        self.fn = fn
        self.calls = []
        self._lock = threading.Lock()

    def available(self):
        return True

    def run(self, task):
        with self._lock:
            self.calls.append(task.label)
        in_path = [b.host_path for b in task.binds if b.read_only][0]
        out_path = [b.host_path for b in task.binds if not b.read_only][0]
        try:
            ret = self.fn(in_path, out_path, task) or 0
        except TaskFailed:
            raise
        except Exception as err:
            return self.check_outcome(task, TaskOutcome(1, b'', str(err).encode('utf-8')))
        return self.check_outcome(task, TaskOutcome(ret, b'', b'function failed' if ret else b''))


def _read_ints(path):
    with open(path) as f:
        return [int(line) for line in f.read().split()]


def sum_lines(in_path, out_path, task):
    """Sum the numbers of a TextFile mount, a commutative reduce"""
    with open(out_path, 'w') as f:
        f.write('%d\n' % sum(_read_ints(in_path)))


def max_lines(in_path, out_path, task):
    """Maximum of the numbers of a TextFile mount"""
    values = _read_ints(in_path)
    with open(out_path, 'w') as f:
        if values:
            f.write('%d\n' % max(values))


def numbered_dataset(num_partitions, per_partition=3):
    """Partitions holding consecutive decimal numbers, starting at 1"""
    partitions = []
    value = 1
    for idx in range(num_partitions):
        records = []
        for _ in range(per_partition):
            records.append(str(value).encode('ascii'))
            value += 1
        partitions.append(Partition(idx, records))
    return Dataset(partitions)


def ls_dir(directory, directories=True):
    """List the contents of directory, recurse to subdirectories"""
    contents = set()
    for root, dirs, files in os.walk(directory):
        prefix = ''
        if root != directory:
            prefix = os.path.relpath(root, directory) + '/'
        contents.update(['%s%s' % (prefix, fname) for fname in files])
        if directories:
            contents.update(['%s%s' % (prefix, dname) for dname in dirs])
    return contents


_engine_available = None


def container_engine_available():
    """Whether a container engine answers, probed once"""
    global _engine_available
    if _engine_available is None:
        from cmr.executor.docker import DockerBackend
        _engine_available = DockerBackend().available()
        cmr.log.debug("Container engine available: %s" % _engine_available)
    return _engine_available


def skip_without_container_engine(func):
    @functools.wraps(func)
    def wrap(*args, **kwargs):
        if not container_engine_available():
            raise unittest.SkipTest("no container engine reachable")
        return func(*args, **kwargs)
    return wrap


skip_unless_large = unittest.skipUnless(LARGE_TESTS, "set CMR_LARGE_TESTS=1 to run")
