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
A local cluster: workers are slot groups within this process and
partitions stick to the worker they were assigned to
"""

import threading
from concurrent.futures import ThreadPoolExecutor

import cmr.log
from cmr.command_wrappers import resume_running, stop_running
from cmr.dataset import Dataset
from cmr.errors import ConfigurationError, LevelFailed, TaskFailed


class WorkerPool(object):
    """
    Workers with their slot counts, worker ids are 0..n-1

    @ivar slots: list of slot counts, indexed by worker id
    @ivar high_water: highest number of tasks seen running at the same
        time, per worker id

    >>> pool = WorkerPool.from_config(2, 4)
    >>> pool.total_slots, pool.worker_ids
    (8, [0, 1])
    """
    def __init__(self, slots):
        slots = list(slots)
        if not slots:
            raise ConfigurationError("A worker pool needs at least one worker")
        if min(slots) < 1:
            raise ConfigurationError("Workers need at least one slot, got %s" % slots)
        self.slots = slots
        self._lock = threading.Lock()
        self._running = [0] * len(slots)
        self.high_water = [0] * len(slots)

    @classmethod
    def from_config(klass, workers, slots_per_worker):
        if workers < 1:
            raise ConfigurationError("Number of workers must be positive, got %d" % workers)
        return klass([slots_per_worker] * workers)

    @property
    def num_workers(self):
        return len(self.slots)

    @property
    def worker_ids(self):
        return list(range(len(self.slots)))

    @property
    def total_slots(self):
        return sum(self.slots)

    def _started(self, worker):
        with self._lock:
            self._running[worker] += 1
            if self._running[worker] > self.high_water[worker]:
                self.high_water[worker] = self._running[worker]

    def _finished(self, worker):
        with self._lock:
            self._running[worker] -= 1

    def __repr__(self):
        return "<WorkerPool %d workers, %d slots>" % (self.num_workers, self.total_slots)


def assign_affinity(ds, pool):
    """
    Give unassigned partitions a worker, round-robin by position

    >>> from cmr.dataset import Partition
    >>> ds = Dataset([Partition(i) for i in range(4)])
    >>> assign_affinity(ds, WorkerPool([1, 1])).affinities
    [0, 1, 0, 1]
    """
    if all(p.affinity is not None for p in ds):
        return ds
    partitions = [p if p.affinity is not None else p.with_affinity(idx % pool.num_workers)
                  for idx, p in enumerate(ds)]
    return Dataset(partitions, ds.origin)


class ScheduledTask(object):
    """
    A unit of work bound to a worker

    @ivar affinity: worker id the task runs on
    @ivar label: name used in logs and errors
    @ivar fn: callable taking the attempt number (0 for the first run),
        its return value is the task's outcome
    """
    def __init__(self, affinity, label, fn):
        self.affinity = affinity
        self.label = label
        self.fn = fn

    def __repr__(self):
        return "<ScheduledTask %s on w%s>" % (self.label, self.affinity)


def _attempt(task, pool, retries, entry):
    for attempt in range(retries + 1):
        if attempt:
            cmr.log.info("Retrying %s (attempt %d of %d)" % (task.label, attempt + 1, retries + 1))
            if entry is not None:
                entry.add(retries=1)
        pool._started(task.affinity)
        try:
            return task.fn(attempt)
        except TaskFailed as err:
            cmr.log.debug("%s failed: %s" % (task.label, err))
            if attempt == retries:
                raise
        finally:
            pool._finished(task.affinity)


def run_level(tasks, pool, retries=1, entry=None):
    """
    Run one level of tasks and wait for all of them

    Every worker gets its own thread pool sized by its slots so a worker
    never runs more tasks than it has slots. Failed tasks are retried
    I{retries} times.

    @param tasks: the tasks of this level
    @type tasks: C{list} of L{ScheduledTask}
    @param pool: the workers
    @type pool: L{WorkerPool}
    @param retries: how often a failed task is rerun
    @param entry: ledger entry that gets the task and retry counts
    @type entry: L{cmr.ledger.LedgerEntry}
    @returns: the task results in task order
    @raises LevelFailed: some tasks still failed after their retries
    """
    if retries < 0:
        raise ConfigurationError("Retries must not be negative, got %d" % retries)
    for task in tasks:
        if task.affinity not in pool.worker_ids:
            raise ConfigurationError("%s has no valid worker affinity: %r"
                                     % (task.label, task.affinity))
    if entry is not None:
        entry.add(tasks=len(tasks))

    executors = [ThreadPoolExecutor(max_workers=slots,
                                    thread_name_prefix='cmr-w%d' % worker)
                 for worker, slots in enumerate(pool.slots)]
    futures = []
    interrupted = False
    try:
        futures = [executors[task.affinity].submit(_attempt, task, pool, retries, entry)
                   for task in tasks]
        results, failures, other = [], [], None
        for idx, (task, future) in enumerate(zip(tasks, futures)):
            try:
                results.append(future.result())
            except TaskFailed as err:
                failures.append((idx, task.label, err))
                results.append(None)
            except Exception as err:
                # environment errors like a vanished engine aren't task failures
                if other is None:
                    other = err
                results.append(None)
    except KeyboardInterrupt:
        interrupted = True
        for future in futures:
            future.cancel()
        stop_running()
        raise
    finally:
        for executor in executors:
            executor.shutdown(wait=True)
        if interrupted:
            resume_running()

    if other is not None:
        raise other
    if failures:
        raise LevelFailed(failures)
    return results

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
