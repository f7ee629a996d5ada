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
The data primitives: map, tree reduce and keyed repartitioning

Every transformation of records is a command run in a container against
the partition's records materialized at a mount point.
"""

import functools
import math
import os
import time

import cmr.log
from cmr.dataset import Dataset, Partition, concat, join_text
from cmr.errors import (CmrIOError, ConfigurationError, KeyFunctionError,
                        TaskFailed)
from cmr.executor import ContainerTask
from cmr.ledger import ShuffleLedger
from cmr.mountpoint import (PART_NAME, collect_output, materialize,
                            prepare_output)
from cmr.scheduler import ScheduledTask, WorkerPool, assign_affinity, run_level
from cmr.tmpfile import TempSpace

FNV64_OFFSET = 0xcbf29ce484222325
FNV64_PRIME = 0x100000001b3
MASK64 = (1 << 64) - 1

DEFAULT_DEPTH = 2


def hash64(key):
    """
    64 bit FNV-1a hash of the key bytes, the same on every platform

    >>> hex(hash64(b''))
    '0xcbf29ce484222325'
    >>> hex(hash64(b'a'))
    '0xaf63dc4c8601ec8c'
    >>> hex(hash64('foobar'))
    '0x85944171f73967e8'
    """
    if isinstance(key, str):
        key = key.encode('utf-8')
    h = FNV64_OFFSET
    for byte in bytearray(key):
        h ^= byte
        h = (h * FNV64_PRIME) & MASK64
    return h


def partition_of(key, num_partitions):
    """
    >>> partition_of(b'a', 1)
    0
    """
    return hash64(key) % num_partitions


class StageSpec(object):
    """
    What a map or reduce stage runs

    @ivar input_mp: where the partition's records show up
    @type input_mp: L{MountPoint}
    @ivar output_mp: where the command leaves its results
    @type output_mp: L{MountPoint}
    @ivar image: container image providing the command
    @ivar command: shell command
    """
    def __init__(self, input_mp, output_mp, image, command):
        if input_mp.container_path == output_mp.container_path:
            raise ConfigurationError("Input and output mount point are both %s"
                                     % input_mp.container_path)
        if not command or not command.strip():
            raise ConfigurationError("A stage needs a command")
        self.input_mp = input_mp
        self.output_mp = output_mp
        self.image = image
        self.command = command

    def __eq__(self, other):
        if not isinstance(other, StageSpec):
            return NotImplemented
        return (self.input_mp, self.output_mp, self.image, self.command) == \
               (other.input_mp, other.output_mp, other.image, other.command)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<StageSpec %s -> %s: %s %r>" % (self.input_mp, self.output_mp,
                                                self.image, self.command)


class ReduceConfig(object):
    """
    @ivar depth_k: depth of the aggregation tree
    """
    def __init__(self, depth_k=DEFAULT_DEPTH):
        if depth_k < 1:
            raise ConfigurationError("Reduce depth must be at least 1, got %d" % depth_k)
        self.depth_k = depth_k

    def __repr__(self):
        return "<ReduceConfig depth %d>" % self.depth_k


def reduce_schedule(num_partitions, depth):
    """
    Partition counts after each merge level of a tree reduce

    The counts follow the geometric series num_partitions^((depth-i)/depth)
    as long as that strictly decreases and always end at 1. There are
    min(depth, num_partitions - 1) levels.

    >>> reduce_schedule(8, 2)
    [3, 1]
    >>> reduce_schedule(8, 3)
    [4, 2, 1]
    >>> reduce_schedule(16, 4)
    [8, 4, 2, 1]
    >>> reduce_schedule(4, 4)
    [3, 2, 1]
    >>> reduce_schedule(1, 2)
    []
    """
    if depth < 1:
        raise ConfigurationError("Reduce depth must be at least 1, got %d" % depth)
    if num_partitions < 1:
        raise ConfigurationError("Need at least one partition, got %d" % num_partitions)
    levels = min(depth, num_partitions - 1)
    schedule = []
    prev = num_partitions
    for i in range(1, levels + 1):
        # the epsilon keeps exact powers from rounding up
        geometric = int(math.ceil(num_partitions ** (float(depth - i) / depth) - 1e-9))
        count = max(levels - i + 1, min(geometric, prev - 1))
        schedule.append(count)
        prev = count
    return schedule


def _materialized_size(partition, mp):
    if mp.is_text:
        return partition.nbytes + len(mp.separator) * len(partition)
    return partition.nbytes


class Engine(object):
    """
    Runs the primitives on a backend and worker pool

    @ivar backend: the task backend
    @type backend: L{cmr.executor.Backend}
    @ivar pool: the workers
    @type pool: L{WorkerPool}
    @ivar temp_space: where mount points get materialized
    @type temp_space: L{TempSpace}
    @ivar ledger: counters of all operations run
    @type ledger: L{ShuffleLedger}
    @ivar retries: how often a failed task is rerun
    @ivar timeout: per task timeout in seconds, 0 for none
    """
    def __init__(self, backend, pool=None, temp_space=None, ledger=None,
                 retries=1, timeout=0, cpu_limit=None):
        self.backend = backend
        self.pool = pool or WorkerPool([1])
        self.temp_space = temp_space or TempSpace()
        self.ledger = ledger if ledger is not None else ShuffleLedger()
        self.retries = retries
        self.timeout = timeout
        self.cpu_limit = cpu_limit

    def _label(self, op, stage_index, partition_id):
        if stage_index is None:
            return "%s partition %d" % (op, partition_id)
        return "stage %d %s partition %d" % (stage_index, op, partition_id)

    def _run_partition(self, partition, stage, stage_index, op, entry, attempt):
        label = self._label(op, stage_index, partition.id)
        task_dir = self.temp_space.new_task_dir('%s-p%d-a%d' % (op, partition.id, attempt))
        try:
            in_path = materialize(partition, stage.input_mp, self.temp_space, task_dir)
            entry.add(bytes_materialized=_materialized_size(partition, stage.input_mp))
            out_path = prepare_output(stage.output_mp, task_dir)
            env = [('CMR_PARTITION', str(partition.id)),
                   ('CMR_STAGE', '' if stage_index is None else str(stage_index))]
            task = ContainerTask(stage.image, stage.command,
                                 binds=[(in_path, stage.input_mp.container_path, True),
                                        (out_path, stage.output_mp.container_path, False)],
                                 env=env, timeout=self.timeout,
                                 cpu_limit=self.cpu_limit, label=label)
            try:
                self.backend.run(task)
                records = collect_output(stage.output_mp, out_path)
            except TaskFailed as err:
                err.partition = partition.id
                err.stage = stage_index
                raise
        finally:
            self.temp_space.release(task_dir)
        return Partition(partition.id, records, partition.affinity)

    def _run_stage(self, ds, stage, stage_index, op, entry):
        tasks = [ScheduledTask(p.affinity, self._label(op, stage_index, p.id),
                               functools.partial(self._run_partition, p, stage,
                                                 stage_index, op, entry))
                 for p in ds]
        return run_level(tasks, self.pool, self.retries, entry)

    def map(self, ds, stage, stage_index=None):
        """
        Run the stage's command once per partition

        Partition count and affinities stay the same, nothing gets
        shuffled.

        @rtype: L{Dataset}
        """
        ds = assign_affinity(ds, self.pool)
        entry = self.ledger.begin('map', stage_index)
        start = time.time()
        cmr.log.info("Mapping %d partitions with '%s'" % (ds.num_partitions, stage.command))
        try:
            partitions = self._run_stage(ds, stage, stage_index, 'map', entry)
        finally:
            entry.finish(time.time() - start)
        return Dataset(partitions, 'map')

    def _merge(self, ds, target, entry):
        groups = [[] for _ in range(target)]
        for partition in ds:
            groups[partition.id % target].append(partition)
        merged = []
        shuffled = 0
        for idx, group in enumerate(groups):
            affinity = idx % self.pool.num_workers
            shuffled += sum(p.nbytes for p in group if p.affinity != affinity)
            merged.append(concat(group, id=idx, affinity=affinity))
        entry.add(bytes_shuffled=shuffled, shuffle_events=1, merge_events=1)
        cmr.log.debug("Merged %d into %d partitions, %d bytes shuffled"
                      % (ds.num_partitions, target, shuffled))
        return Dataset(merged, 'reduce')

    def reduce(self, ds, stage, cfg=None, stage_index=None):
        """
        Aggregate all records into one partition with a tree of depth
        I{cfg.depth_k}

        Each level runs the command on every partition and then merges
        the results into fewer partitions, a final run aggregates the
        last partition. The command must be associative and commutative.

        @type cfg: L{ReduceConfig}
        @rtype: L{Dataset}
        """
        cfg = cfg or ReduceConfig()
        ds = assign_affinity(ds, self.pool)
        schedule = reduce_schedule(ds.num_partitions, cfg.depth_k)
        entry = self.ledger.begin('reduce', stage_index)
        start = time.time()
        cmr.log.info("Reducing %d partitions with '%s', schedule %s"
                     % (ds.num_partitions, stage.command, schedule or 'none'))
        try:
            current = ds
            for level, target in enumerate(schedule, 1):
                cmr.log.debug("Reduce level %d: %d -> %d partitions"
                              % (level, current.num_partitions, target))
                current = Dataset(self._run_stage(current, stage, stage_index,
                                                  'reduce', entry), 'reduce')
                current = self._merge(current, target, entry)
            partitions = self._run_stage(current, stage, stage_index, 'reduce', entry)
        finally:
            entry.finish(time.time() - start)
        return Dataset(partitions, 'reduce')

    def repartition_by(self, ds, key_fn, num_partitions, stage_index=None):
        """
        Move records so that equal keys share a partition

        A record with key k ends up in partition hash64(k) % num_partitions.
        Records with the same key are contiguous within their partition
        and keep their source order.

        @param key_fn: maps a record to its key (C{bytes} or C{str})
        @raises KeyFunctionError: I{key_fn} failed, carries the global
            record index
        @rtype: L{Dataset}
        """
        if num_partitions < 1:
            raise ConfigurationError("Number of partitions must be positive, got %d"
                                     % num_partitions)
        ds = assign_affinity(ds, self.pool)
        entry = self.ledger.begin('repartition', stage_index)
        start = time.time()
        try:
            groups = [{} for _ in range(num_partitions)]
            shuffled = 0
            index = 0
            for partition in ds:
                for record in partition.records:
                    try:
                        key = key_fn(record)
                        if isinstance(key, str):
                            key = key.encode('utf-8')
                        target = partition_of(key, num_partitions)
                    except Exception as err:
                        raise KeyFunctionError(index, err)
                    if target != partition.id:
                        shuffled += len(record)
                    groups[target].setdefault(key, []).append(record)
                    index += 1
            partitions = [Partition(idx, [r for records in group.values() for r in records],
                                    idx % self.pool.num_workers)
                          for idx, group in enumerate(groups)]
            entry.add(bytes_shuffled=shuffled, shuffle_events=1)
            cmr.log.info("Repartitioned %d records into %d partitions, %d bytes shuffled"
                         % (index, num_partitions, shuffled))
        finally:
            entry.finish(time.time() - start)
        return Dataset(partitions, 'repartition')

    @staticmethod
    def collect(ds):
        """All records in partition id order"""
        return ds.records()

    @staticmethod
    def save_text(ds, sep, path):
        """Write all partitions as one separator joined file"""
        try:
            parent = os.path.dirname(os.path.abspath(path))
            if not os.path.isdir(parent):
                os.makedirs(parent)
            with open(path, 'wb') as f:
                for partition in ds:
                    f.write(join_text(partition, sep))
        except (IOError, OSError) as err:
            raise CmrIOError("Failed to write '%s': %s" % (path, err))
        cmr.log.info("Wrote %d records to '%s'" % (ds.count(), path))

    @staticmethod
    def save_binary(ds, directory):
        """Write one file per record, named by the record's position"""
        try:
            if not os.path.isdir(directory):
                os.makedirs(directory)
            for idx, record in enumerate(ds.records()):
                with open(os.path.join(directory, PART_NAME % idx), 'wb') as f:
                    f.write(record)
        except (IOError, OSError) as err:
            raise CmrIOError("Failed to write to '%s': %s" % (directory, err))
        cmr.log.info("Wrote %d records to '%s'" % (ds.count(), directory))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
