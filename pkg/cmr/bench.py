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
Weak scaling benchmarks

A pipeline runs on growing shares of its input with growing worker
pools. The weak scaling efficiency of a point is the run time of the
smallest point divided by its run time, 1.0 being ideal. The ingestion
speedup is the ingestion time with the smallest pool divided by the
ingestion time of the point.
"""

import collections
import copy
import csv
import time

import cmr.log
from cmr.errors import CmrIOError, ConfigurationError
from cmr.ingest import ingest, sample_prefix
from cmr.pipeline import build_engine, execute

AUTO = 'auto'
COLUMNS = ('pool', 'fraction', 'records', 'ingest_time', 'run_time', 'wse',
           'ingest_speedup')

BenchPoint = collections.namedtuple('BenchPoint', ['pool', 'fraction', 'records',
                                                   'ingest_time', 'run_time'])


def pair_points(pools, fractions=AUTO):
    """
    Pair pool sizes with data fractions

    >>> pair_points([1, 2, 4])
    [(1, 0.25), (2, 0.5), (4, 1.0)]
    >>> pair_points([1, 2], [0.5])
    Traceback (most recent call last):
    ...
    cmr.errors.ConfigurationError: Got 2 pool sizes but 1 fractions, they are used in pairs
    """
    pools = list(pools)
    if not pools:
        raise ConfigurationError("Need at least one pool size")
    if min(pools) < 1:
        raise ConfigurationError("Pool sizes must be positive, got %s" % pools)
    if fractions == AUTO:
        largest = float(max(pools))
        fractions = [pool / largest for pool in pools]
    fractions = list(fractions)
    if len(fractions) != len(pools):
        raise ConfigurationError("Got %d pool sizes but %d fractions, they are used in pairs"
                                 % (len(pools), len(fractions)))
    for fraction in fractions:
        if not 0 < fraction <= 1:
            raise ConfigurationError("Fractions must be in (0, 1], got %s" % fraction)
    return list(zip(pools, fractions))


def parse_fractions(value):
    """
    >>> parse_fractions('auto')
    'auto'
    >>> parse_fractions('1/4, 0.5,1')
    [0.25, 0.5, 1.0]
    """
    if value.strip() == AUTO:
        return AUTO
    fractions = []
    for item in value.split(','):
        item = item.strip()
        if not item:
            continue
        try:
            if '/' in item:
                num, den = item.split('/', 1)
                fractions.append(float(num) / float(den))
            else:
                fractions.append(float(item))
        except (ValueError, ZeroDivisionError):
            raise ConfigurationError("Invalid fraction '%s'" % item)
    return fractions


def scaling_table(points):
    """
    Efficiency and speedup of every point, relative to the point with
    the smallest pool

    >>> rows = scaling_table([BenchPoint(1, 1/16., 10, 8.0, 100.0),
    ...                       BenchPoint(16, 1.0, 160, 2.0, 110.0)])
    >>> round(rows[1]['wse'], 6), rows[1]['ingest_speedup']
    (0.909091, 4.0)
    """
    points = list(points)
    if not points:
        return []
    base = min(points, key=lambda p: p.pool)
    rows = []
    for point in points:
        row = point._asdict()
        row['wse'] = base.run_time / point.run_time if point.run_time else None
        row['ingest_speedup'] = (base.ingest_time / point.ingest_time
                                 if point.ingest_time else None)
        rows.append(dict((col, row[col]) for col in COLUMNS))
    return rows


def run_bench(spec, pools, fractions, config, backend=None, clock=time.time):
    """
    Run a pipeline once per (pool, fraction) point

    The pool of a point has as many single slot workers as its size and
    the input is split into as many partitions. The sink isn't written.

    @param spec: the pipeline
    @type spec: L{cmr.pipeline.PipelineSpec}
    @param pools: pool sizes
    @param fractions: data fractions or L{AUTO}
    @type config: L{cmr.pipeline.RunConfig}
    @param clock: time source, for tests
    @returns: the rows of L{scaling_table}
    """
    points = []
    config = copy.copy(config)
    for pool_size, fraction in pair_points(pools, fractions):
        config.workers = pool_size
        config.slots = 1
        engine = build_engine(config, backend)
        partitions = engine.pool.total_slots
        start = clock()
        ds = sample_prefix(ingest(spec.source, partitions), fraction, partitions)
        ingest_time = clock() - start
        cmr.log.info("Bench point: pool %d, fraction %.4f, %d records"
                     % (pool_size, fraction, ds.count()))
        start = clock()
        execute(engine, spec, ds, config.depth)
        run_time = clock() - start
        points.append(BenchPoint(pool_size, fraction, ds.count(), ingest_time, run_time))
    return scaling_table(points)


def _fmt(value):
    if value is None:
        return '-'
    if isinstance(value, float):
        return '%.6f' % value
    return str(value)


def format_bench_table(rows):
    """
    >>> print(format_bench_table([]))
    no points
    """
    if not rows:
        return "no points"
    lines = [list(COLUMNS)] + [[_fmt(row[col]) for col in COLUMNS] for row in rows]
    widths = [max(len(line[i]) for line in lines) for i in range(len(COLUMNS))]
    return '\n'.join('  '.join(cell.rjust(w) for cell, w in zip(line, widths))
                     for line in lines)


def write_csv(rows, path):
    try:
        with open(path, 'w') as f:
            writer = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator='\n')
            writer.writeheader()
            for row in rows:
                writer.writerow(dict((col, _fmt(row[col])) for col in COLUMNS))
    except (IOError, OSError) as err:
        raise CmrIOError("Failed to write '%s': %s" % (path, err))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
