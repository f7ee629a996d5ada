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
"""Load datasets from files, directories and object stores"""

import math
import os

import cmr.log
from cmr.dataset import (DEFAULT_SEPARATOR, Dataset, Partition, check_separator,
                         from_records, split_text)
from cmr.errors import CmrIOError, ConfigurationError
from cmr.ingest.objectstore import FilesystemObjectStore

TEXT_FILE = 'text_file'
TEXT_DIR = 'text_dir'
BINARY_DIR = 'binary_dir'
OBJECT_PREFIX = 'object_prefix'
KINDS = (TEXT_FILE, TEXT_DIR, BINARY_DIR, OBJECT_PREFIX)


class Source(object):
    """
    Where a dataset comes from

    @ivar kind: one of L{KINDS}
    @ivar location: file or directory path, object name prefix for
        object stores
    @ivar separator: record separator of the text kinds
    @ivar store_root: root directory of the filesystem backed object
        store, defaults to the current directory
    """
    def __init__(self, kind, location, separator=DEFAULT_SEPARATOR, store_root=None):
        if kind not in KINDS:
            raise ConfigurationError("Unknown source kind '%s', use one of %s"
                                     % (kind, ", ".join(KINDS)))
        if location is None or (kind != OBJECT_PREFIX and not location):
            raise ConfigurationError("Source of kind '%s' needs a location" % kind)
        self.kind = kind
        self.location = location
        self.separator = check_separator(separator)
        self.store_root = store_root

    @property
    def is_text(self):
        return self.kind != BINARY_DIR

    def __eq__(self, other):
        if not isinstance(other, Source):
            return NotImplemented
        return (self.kind, self.location, self.separator, self.store_root) == \
               (other.kind, other.location, other.separator, other.store_root)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "<Source %s '%s'>" % (self.kind, self.location)


def _read(path):
    try:
        with open(path, 'rb') as f:
            return f.read()
    except (IOError, OSError) as err:
        raise CmrIOError("Can't read '%s': %s" % (path, err))


def _dir_files(path):
    """Regular files directly in I{path}, sorted by name"""
    try:
        names = sorted(os.listdir(path))
    except (IOError, OSError) as err:
        raise CmrIOError("Can't list '%s': %s" % (path, err))
    return [os.path.join(path, name) for name in names
            if os.path.isfile(os.path.join(path, name))]


def join_chunks(chunks, sep):
    """
    Concatenate text chunks so that every chunk ends with the separator

    >>> join_chunks([b'a\\nb', b'c\\n', b''], b'\\n')
    b'a\\nb\\nc\\n'
    """
    out = []
    for chunk in chunks:
        if not chunk:
            continue
        out.append(chunk)
        if not chunk.endswith(sep):
            out.append(sep)
    return b''.join(out)


def round_robin(records, target_partitions):
    """
    Deal records to partitions like cards

    >>> [len(p) for p in round_robin([b'x'] * 10, 3)]
    [4, 3, 3]
    >>> round_robin([], 3).num_partitions
    1
    """
    count = max(1, min(target_partitions, len(records)))
    return Dataset([Partition(j, records[j::count]) for j in range(count)])


def ingest(src, target_partitions, store=None):
    """
    Load a dataset

    Text sources are split into at most I{target_partitions} byte balanced
    partitions, directories and object prefixes are read in name order.
    Binary directories give one record per file dealt round-robin.

    @param src: what to load
    @type src: L{Source}
    @param target_partitions: upper bound of the number of partitions
    @param store: object store for L{OBJECT_PREFIX} sources
    @type store: L{cmr.ingest.objectstore.ObjectStore}
    @rtype: L{Dataset}
    @raises CmrIOError: the source can't be read
    """
    if target_partitions < 1:
        raise ConfigurationError("Number of partitions must be positive, got %d"
                                 % target_partitions)
    if src.kind == TEXT_FILE:
        ds = split_text(_read(src.location), src.separator, target_partitions)
    elif src.kind == TEXT_DIR:
        files = _dir_files(src.location)
        if not files:
            cmr.log.warn("No files in '%s'" % src.location)
        ds = split_text(join_chunks([_read(f) for f in files], src.separator),
                        src.separator, target_partitions)
    elif src.kind == OBJECT_PREFIX:
        store = store or FilesystemObjectStore(src.store_root or os.curdir)
        names = store.list(src.location)
        if not names:
            cmr.log.warn("No objects under prefix '%s' in %r" % (src.location, store))
        ds = split_text(join_chunks([store.get(n) for n in names], src.separator),
                        src.separator, target_partitions)
    else:
        files = _dir_files(src.location)
        if not files:
            cmr.log.warn("No files in '%s'" % src.location)
        ds = round_robin([_read(f) for f in files], target_partitions)
    cmr.log.debug("Ingested %d records in %d partitions from %r"
                  % (ds.count(), ds.num_partitions, src))
    return ds


def sample_prefix(ds, fraction, target_partitions=None):
    """
    The first ceil(fraction * N) records, rebalanced

    >>> ds = from_records([b'1', b'2', b'3', b'4'], 2)
    >>> sample_prefix(ds, 0.5).records()
    [b'1', b'2']
    >>> sample_prefix(ds, 0.3, 1).records()
    [b'1', b'2']
    """
    if not 0 < fraction <= 1:
        raise ConfigurationError("Sample fraction must be in (0, 1], got %s" % fraction)
    records = ds.records()
    count = int(math.ceil(fraction * len(records) - 1e-9))
    return from_records(records[:count], target_partitions or ds.num_partitions)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
