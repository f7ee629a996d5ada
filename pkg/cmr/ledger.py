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
"""Count what every operation of a pipeline run did and moved"""

import json
import threading

from cmr.errors import CmrIOError

COUNTERS = ('tasks', 'retries', 'bytes_materialized', 'bytes_shuffled',
            'shuffle_events', 'merge_events')
COLUMNS = ('op', 'stage') + COUNTERS + ('wall_time',)


class LedgerEntry(object):
    """
    Counters of a single operation, updated from the task threads

    @ivar op: 'map', 'reduce' or 'repartition'
    @ivar stage: pipeline stage index or C{None}
    """
    def __init__(self, op, stage, lock):
        self.op = op
        self.stage = stage
        self.wall_time = 0.0
        self._lock = lock
        for counter in COUNTERS:
            setattr(self, counter, 0)

    def add(self, **counts):
        with self._lock:
            for name, value in counts.items():
                if name not in COUNTERS:
                    raise KeyError("Unknown ledger counter '%s'" % name)
                setattr(self, name, getattr(self, name) + value)

    def finish(self, wall_time):
        with self._lock:
            self.wall_time = wall_time

    def as_dict(self):
        with self._lock:
            return dict((col, getattr(self, col)) for col in COLUMNS)

    def __repr__(self):
        return "<LedgerEntry %s: %s>" % (self.op, self.as_dict())


class ShuffleLedger(object):
    """
    Entries of all operations of a run, in the order they started. An
    entry is recorded when its operation starts so aborted operations
    still show up.
    """
    def __init__(self):
        self._lock = threading.Lock()
        self._entries = []

    def begin(self, op, stage=None):
        entry = LedgerEntry(op, stage, self._lock)
        with self._lock:
            self._entries.append(entry)
        return entry

    @property
    def entries(self):
        with self._lock:
            return list(self._entries)

    def __len__(self):
        return len(self.entries)


def ledger_report(ledger):
    """
    Per operation rows and their totals

    >>> ledger = ShuffleLedger()
    >>> ledger_report(ledger)['operations']
    []
    >>> ledger.begin('map').add(tasks=2, bytes_materialized=10)
    >>> ledger_report(ledger)['totals']['tasks']
    2
    """
    rows = [entry.as_dict() for entry in ledger.entries]
    totals = dict((counter, sum(row[counter] for row in rows)) for counter in COUNTERS)
    totals['wall_time'] = sum(row['wall_time'] for row in rows)
    return {'operations': rows, 'totals': totals}


def write_report(report, path):
    """Write a report as JSON"""
    try:
        with open(path, 'w') as f:
            json.dump(report, f, indent=2, sort_keys=True)
            f.write('\n')
    except (IOError, OSError) as err:
        raise CmrIOError("Failed to write report '%s': %s" % (path, err))


def format_table(report):
    """
    Human readable form of a report

    >>> print(format_table({'operations': [], 'totals': {}}))
    no operations
    """
    rows = report['operations']
    if not rows:
        return "no operations"
    header = ['#'] + list(COLUMNS)
    lines = []
    for idx, row in enumerate(rows):
        cells = [str(idx), row['op'], '-' if row['stage'] is None else str(row['stage'])]
        cells += [str(row[c]) for c in COUNTERS]
        cells.append('%.3f' % row['wall_time'])
        lines.append(cells)
    totals = report['totals']
    lines.append(['', 'total', ''] + [str(totals[c]) for c in COUNTERS] +
                 ['%.3f' % totals['wall_time']])
    widths = [max(len(r[i]) for r in [header] + lines) for i in range(len(header))]
    out = []
    for cells in [header] + lines:
        out.append('  '.join(cell.rjust(w) for cell, w in zip(cells, widths)).rstrip())
    return '\n'.join(out)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
