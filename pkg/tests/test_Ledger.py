# vim: set fileencoding=utf-8 :
"""Test L{cmr.ledger}"""

from . import context

import json
import os
import threading
import unittest

from cmr.errors import CmrIOError
from cmr.ledger import (COUNTERS, ShuffleLedger, format_table, ledger_report,
                        write_report)


class TestLedger(unittest.TestCase):
    def setUp(self):
        self.tmpdir = context.new_tmpdir(__name__)

    def tearDown(self):
        context.teardown()

    def test_entries_in_start_order(self):
        ledger = ShuffleLedger()
        ledger.begin('map', 1)
        ledger.begin('reduce', 2).add(merge_events=2)
        self.assertEqual([(e.op, e.stage) for e in ledger.entries],
                         [('map', 1), ('reduce', 2)])
        self.assertEqual(len(ledger), 2)

    def test_unknown_counter(self):
        self.assertRaises(KeyError, ShuffleLedger().begin('map').add, bogus=1)

    def test_concurrent_adds(self):
        entry = ShuffleLedger().begin('map')

        def add():
            for _ in range(1000):
                entry.add(tasks=1, bytes_materialized=2)

        threads = [threading.Thread(target=add) for _ in range(8)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        self.assertEqual((entry.tasks, entry.bytes_materialized), (8000, 16000))

    def test_report_totals(self):
        ledger = ShuffleLedger()
        ledger.begin('map').add(tasks=4, bytes_materialized=100)
        reduce = ledger.begin('reduce')
        reduce.add(tasks=5, bytes_shuffled=7, shuffle_events=2, merge_events=2)
        reduce.finish(1.5)
        report = ledger_report(ledger)
        self.assertEqual(sorted(report['totals']), sorted(COUNTERS + ('wall_time',)))
        self.assertEqual(report['totals']['tasks'], 9)
        self.assertEqual(report['totals']['shuffle_events'], 2)
        self.assertEqual(report['operations'][1]['wall_time'], 1.5)

        path = self.tmpdir.join('report.json')
        write_report(report, path)
        with open(path) as f:
            self.assertEqual(json.load(f), report)

        table = format_table(report).splitlines()
        self.assertEqual(len(table), 4)
        self.assertIn('bytes_shuffled', table[0])
        self.assertIn('total', table[-1])

    def test_write_report_fails(self):
        path = os.path.join(self.tmpdir.join('missing'), 'report.json')
        with self.assertRaises(CmrIOError) as ctx:
            write_report({}, path)
        self.assertEqual(ctx.exception.exit_code, 4)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
