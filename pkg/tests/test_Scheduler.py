# vim: set fileencoding=utf-8 :
"""Test L{cmr.scheduler}"""

from . import context

import threading
import time
import unittest
from concurrent.futures import Future

import mock

import cmr.command_wrappers
from cmr.command_wrappers import ShellCommand
from cmr.errors import (BackendUnavailable, ConfigurationError, LevelFailed,
                        TaskFailed)
from cmr.ledger import ShuffleLedger
from cmr.scheduler import ScheduledTask, WorkerPool, run_level


class TestWorkerPool(unittest.TestCase):
    def test_from_config(self):
        pool = WorkerPool.from_config(3, 2)
        self.assertEqual(pool.slots, [2, 2, 2])
        self.assertEqual(pool.total_slots, 6)

    def test_invalid(self):
        self.assertRaises(ConfigurationError, WorkerPool, [])
        self.assertRaises(ConfigurationError, WorkerPool, [1, 0])
        self.assertRaises(ConfigurationError, WorkerPool.from_config, 0, 4)


class TestRunLevel(unittest.TestCase):
    def test_results_in_task_order(self):
        pool = WorkerPool([2, 2])
        tasks = [ScheduledTask(i % 2, 'task %d' % i, lambda attempt, i=i: i * i)
                 for i in range(10)]
        self.assertEqual(run_level(tasks, pool), [i * i for i in range(10)])

    def test_slots_never_exceeded(self):
        """8 slow tasks on 2 workers with 4 slots each"""
        pool = WorkerPool.from_config(2, 4)
        running = [0]
        peak = [0]
        lock = threading.Lock()

        def work(attempt):
            with lock:
                running[0] += 1
                peak[0] = max(peak[0], running[0])
            time.sleep(0.05)
            with lock:
                running[0] -= 1

        tasks = [ScheduledTask(i % 2, 'task %d' % i, work) for i in range(16)]
        run_level(tasks, pool)
        for worker, high in enumerate(pool.high_water):
            self.assertLessEqual(high, pool.slots[worker])
            self.assertGreaterEqual(high, 1)
        self.assertLessEqual(peak[0], pool.total_slots)

    def test_single_slot_serializes(self):
        pool = WorkerPool([1])
        tasks = [ScheduledTask(0, 'task %d' % i, lambda attempt: time.sleep(0.01))
                 for i in range(5)]
        run_level(tasks, pool)
        self.assertEqual(pool.high_water, [1])

    def test_retry_succeeds(self):
        pool = WorkerPool([1])
        ledger = ShuffleLedger()
        entry = ledger.begin('map')
        attempts = []

        def flaky(attempt):
            attempts.append(attempt)
            if attempt == 0:
                raise TaskFailed("transient")
            return 'ok'

        self.assertEqual(run_level([ScheduledTask(0, 'flaky', flaky)], pool,
                                   retries=1, entry=entry), ['ok'])
        self.assertEqual(attempts, [0, 1])
        self.assertEqual((entry.tasks, entry.retries), (1, 1))

    def test_failure_after_retries(self):
        pool = WorkerPool([2])
        calls = []

        def broken(attempt):
            calls.append(attempt)
            raise TaskFailed("always", partition=3)

        tasks = [ScheduledTask(0, 'good', lambda attempt: 1),
                 ScheduledTask(0, 'broken', broken)]
        with self.assertRaises(LevelFailed) as ctx:
            run_level(tasks, pool, retries=2)
        self.assertEqual(calls, [0, 1, 2])
        failures = ctx.exception.failures
        self.assertEqual([(idx, label) for idx, label, _ in failures], [(1, 'broken')])
        self.assertEqual(ctx.exception.partition, 3)
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_no_retry_for_environment_errors(self):
        pool = WorkerPool([1])
        calls = []

        def gone(attempt):
            calls.append(attempt)
            raise BackendUnavailable("engine went away")

        self.assertRaises(BackendUnavailable, run_level,
                          [ScheduledTask(0, 'gone', gone)], pool, retries=3)
        self.assertEqual(calls, [0])

    def test_interrupt_kills_running_tasks(self):
        """Ctrl-C doesn't wait for the task commands to finish"""
        pool = WorkerPool([2])
        tasks = [ScheduledTask(0, 'sleeper %d' % i,
                               lambda attempt: ShellCommand('sleep 5; true').call([]))
                 for i in range(3)]

        def interrupt(*args, **kwargs):
            deadline = time.time() + 2
            while not cmr.command_wrappers._running and time.time() < deadline:
                time.sleep(0.01)
            raise KeyboardInterrupt()

        start = time.time()
        with mock.patch.object(Future, 'result', side_effect=interrupt):
            self.assertRaises(KeyboardInterrupt, run_level, tasks, pool)
        self.assertLess(time.time() - start, 4)
        self.assertEqual(cmr.command_wrappers._running, set())
        self.assertEqual(ShellCommand('true').call([]), 0)

    def test_invalid_affinity(self):
        pool = WorkerPool([1, 1])
        self.assertRaises(ConfigurationError, run_level,
                          [ScheduledTask(2, 'lost', lambda attempt: None)], pool)
        self.assertRaises(ConfigurationError, run_level,
                          [ScheduledTask(None, 'lost', lambda attempt: None)], pool)

    def test_negative_retries(self):
        self.assertRaises(ConfigurationError, run_level, [], WorkerPool([1]), -1)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
