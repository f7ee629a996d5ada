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
"""Immutable partitioned datasets of byte records"""

import bisect

from cmr.errors import ConfigurationError

DEFAULT_SEPARATOR = b'\n'
# Separator of molecules in Structure-Data Files
SDF_SEPARATOR = b'\n$$$$\n'

ORIGINS = ('ingested', 'map', 'reduce', 'repartition')


def check_separator(sep):
    """
    Validate a record separator, text is encoded as UTF-8

    >>> check_separator('\\n')
    b'\\n'
    >>> check_separator(b'')
    Traceback (most recent call last):
    ...
    cmr.errors.ConfigurationError: Record separator must not be empty
    """
    if isinstance(sep, str):
        sep = sep.encode('utf-8')
    if not sep:
        raise ConfigurationError("Record separator must not be empty")
    return bytes(sep)


class Partition(object):
    """
    An ordered, immutable group of records

    @ivar id: partition id, unique within its dataset
    @ivar records: the records, a C{tuple} of C{bytes}
    @ivar affinity: worker id the partition lives on or C{None}
    """
    __slots__ = ('_id', '_records', '_affinity')

    def __init__(self, id, records=(), affinity=None):
        if id < 0:
            raise ValueError("Partition id must not be negative: %d" % id)
        self._id = id
        self._records = tuple(records)
        self._affinity = affinity

    @property
    def id(self):
        return self._id

    @property
    def records(self):
        return self._records

    @property
    def affinity(self):
        return self._affinity

    @property
    def nbytes(self):
        """Payload size of all records"""
        return sum(len(r) for r in self._records)

    def with_affinity(self, affinity):
        return Partition(self._id, self._records, affinity)

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return (self._id, self._records, self._affinity) == \
               (other._id, other._records, other._affinity)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._id, self._records, self._affinity))

    def __repr__(self):
        return "<Partition %d: %d records, %d bytes, affinity %s>" % (
            self._id, len(self._records), self.nbytes, self._affinity)


class Dataset(object):
    """
    An immutable list of partitions, the input and output of every
    primitive

    >>> ds = Dataset([Partition(0, [b'a']), Partition(1, [b'b', b'c'])])
    >>> ds.num_partitions, ds.count()
    (2, 3)
    >>> ds.records()
    [b'a', b'b', b'c']
    >>> Dataset([Partition(1, [b'a'])])
    Traceback (most recent call last):
    ...
    ValueError: Partition ids must be 0..0, got [1]
    """
    def __init__(self, partitions, origin='ingested'):
        partitions = tuple(partitions)
        if not partitions:
            partitions = (Partition(0),)
        ids = [p.id for p in partitions]
        if ids != list(range(len(partitions))):
            raise ValueError("Partition ids must be 0..%d, got %s" %
                             (len(partitions) - 1, ids))
        if origin not in ORIGINS:
            raise ValueError("Unknown dataset origin '%s'" % origin)
        self._partitions = partitions
        self._origin = origin

    @property
    def partitions(self):
        return self._partitions

    @property
    def origin(self):
        return self._origin

    @property
    def num_partitions(self):
        return len(self._partitions)

    @property
    def affinities(self):
        return [p.affinity for p in self._partitions]

    @property
    def nbytes(self):
        return sum(p.nbytes for p in self._partitions)

    def count(self):
        """Number of records over all partitions"""
        return sum(len(p) for p in self._partitions)

    def records(self):
        """All records in partition id order"""
        return [r for p in self._partitions for r in p.records]

    def __getitem__(self, idx):
        return self._partitions[idx]

    def __len__(self):
        return len(self._partitions)

    def __iter__(self):
        return iter(self._partitions)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self._partitions, self._origin) == (other._partitions, other._origin)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<Dataset %s: %d partitions, %d records>" % (
            self._origin, self.num_partitions, self.count())


def split_records(stream, sep=DEFAULT_SEPARATOR):
    """
    Split a byte stream into the records delimited by I{sep}. A trailing
    empty segment (the stream ends with I{sep}) is not a record.

    >>> split_records(b'A\\nB\\nC')
    [b'A', b'B', b'C']
    >>> split_records(b'A\\n\\nB\\n')
    [b'A', b'', b'B']
    >>> split_records(b'')
    []
    """
    sep = check_separator(sep)
    if not stream:
        return []
    segments = stream.split(sep)
    if segments[-1] == b'':
        segments.pop()
    return segments


def _cut_points(sizes, target_partitions):
    """
    Record indices to cut a record list at so that the pieces are
    balanced by payload bytes. Each cut goes to the record boundary
    nearest to its ideal offset, ties go to the later boundary.

    >>> _cut_points([1, 1, 1], 2)
    [2]
    >>> _cut_points([5, 5, 5, 5], 2)
    [2]
    >>> _cut_points([10, 1], 4)
    [1]
    """
    if target_partitions <= 1 or len(sizes) <= 1:
        return []
    total = sum(sizes)
    # offsets are scaled by target_partitions to stay in integers
    scaled = [0]
    for size in sizes:
        scaled.append(scaled[-1] + size * target_partitions)
    cuts = []
    for j in range(1, target_partitions):
        ideal = total * j
        idx = bisect.bisect_left(scaled, ideal)
        if idx >= len(scaled):
            best = len(scaled) - 1
        elif idx > 0 and ideal - scaled[idx - 1] < scaled[idx] - ideal:
            best = idx - 1
        else:
            best = idx
        if 0 < best < len(sizes) and (not cuts or best > cuts[-1]):
            cuts.append(best)
    return cuts


def from_records(records, target_partitions=1, origin='ingested'):
    """
    Distribute records into at most I{target_partitions} contiguous
    partitions balanced by byte count

    >>> ds = from_records([b'A', b'B', b'C'], 2)
    >>> [list(p.records) for p in ds]
    [[b'A', b'B'], [b'C']]
    """
    if target_partitions < 1:
        raise ConfigurationError("Number of partitions must be positive, got %d"
                                 % target_partitions)
    records = list(records)
    cuts = [0] + _cut_points([len(r) for r in records], target_partitions) + [len(records)]
    partitions = [Partition(i, records[start:end])
                  for i, (start, end) in enumerate(zip(cuts[:-1], cuts[1:]))]
    return Dataset(partitions, origin)


def split_text(stream, sep=DEFAULT_SEPARATOR, target_partitions=1):
    """
    Split a byte stream into records and those into balanced partitions

    @param stream: the raw data
    @type stream: C{bytes}
    @param sep: record separator, never part of the records
    @type sep: C{bytes}
    @param target_partitions: upper bound of the number of partitions
    @type target_partitions: C{int}
    @rtype: L{Dataset}

    >>> ds = split_text(b'A\\nB\\nC', b'\\n', 2)
    >>> [list(p.records) for p in ds]
    [[b'A', b'B'], [b'C']]
    >>> ds = split_text(b'GGAA', b'\\n', 1)
    >>> [list(p.records) for p in ds]
    [[b'GGAA']]
    >>> split_text(b'', b'\\n', 3).num_partitions
    1
    """
    if target_partitions < 1:
        raise ConfigurationError("Number of partitions must be positive, got %d"
                                 % target_partitions)
    return from_records(split_records(stream, sep), target_partitions)


def join_text(partition, sep=DEFAULT_SEPARATOR):
    """
    Join records with I{sep}, including one after the last record

    @param partition: a L{Partition} or a list of records
    @rtype: C{bytes}

    >>> join_text([b'A', b'B'], b'\\n')
    b'A\\nB\\n'
    >>> join_text(Partition(0), b'\\n')
    b''
    """
    sep = check_separator(sep)
    records = partition.records if isinstance(partition, Partition) else partition
    if not records:
        return b''
    return sep.join(records) + sep


def concat(partitions, id=0, affinity=None):
    """
    Concatenate the records of partitions in the given order

    >>> concat([Partition(0, [b'a']), Partition(1, [b'b', b'c'])]).records
    (b'a', b'b', b'c')
    >>> len(concat([]))
    0
    """
    records = []
    for partition in partitions:
        records.extend(partition.records)
    return Partition(id, records, affinity)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
