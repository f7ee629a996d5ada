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
"""Move partitions in and out of the file space containers see"""

import errno
import os
import posixpath

import cmr.log
from cmr.dataset import DEFAULT_SEPARATOR, check_separator, join_text, split_records
from cmr.errors import CmrIOError, ConfigurationError, TaskOutputError

TEXT_FILE = 'TextFile'
BINARY_FILES = 'BinaryFiles'
KINDS = (TEXT_FILE, BINARY_FILES)

PART_NAME = 'part-%05d'


class MountPoint(object):
    """
    How records show up inside a container

    A TextFile mount is a single file with the records joined by the
    separator, a BinaryFiles mount is a directory with one file per
    record.

    >>> MountPoint(TEXT_FILE, '/dna')
    TextFile('/dna', b'\\n')
    >>> MountPoint(BINARY_FILES, 'out')
    Traceback (most recent call last):
    ...
    cmr.errors.ConfigurationError: Mount point path must be absolute: 'out'
    """
    def __init__(self, kind, container_path, separator=DEFAULT_SEPARATOR):
        if kind not in KINDS:
            raise ConfigurationError("Unknown mount point kind '%s', use one of %s"
                                     % (kind, ", ".join(KINDS)))
        if not container_path or not posixpath.isabs(container_path):
            raise ConfigurationError("Mount point path must be absolute: %r"
                                     % container_path)
        if posixpath.normpath(container_path) == '/':
            raise ConfigurationError("Can't mount over '/'")
        self.kind = kind
        self.container_path = posixpath.normpath(container_path)
        self.separator = check_separator(separator) if kind == TEXT_FILE else None

    @classmethod
    def text_file(klass, container_path, separator=DEFAULT_SEPARATOR):
        return klass(TEXT_FILE, container_path, separator)

    @classmethod
    def binary_files(klass, container_path):
        return klass(BINARY_FILES, container_path)

    @property
    def is_text(self):
        return self.kind == TEXT_FILE

    @property
    def basename(self):
        return posixpath.basename(self.container_path)

    def __eq__(self, other):
        if not isinstance(other, MountPoint):
            return NotImplemented
        return (self.kind, self.container_path, self.separator) == \
               (other.kind, other.container_path, other.separator)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.kind, self.container_path, self.separator))

    def __repr__(self):
        if self.is_text:
            return "%s(%r, %r)" % (self.kind, self.container_path, self.separator)
        return "%s(%r)" % (self.kind, self.container_path)


def _host_path(mp, task_dir, side):
    return os.path.join(task_dir, side, mp.basename)


def _makedirs(path, what):
    try:
        os.makedirs(path)
    except OSError as err:
        raise CmrIOError("Can't create '%s' for %s: %s" % (path, what, err))


def _write(path, data, temp_space, what):
    try:
        with open(path, 'wb') as f:
            f.write(data)
    except (IOError, OSError) as err:
        if temp_space is not None and err.errno == errno.ENOSPC:
            raise temp_space.no_space(err, what)
        raise CmrIOError("Can't write '%s' for %s: %s" % (path, what, err))


def _read(path, mp):
    try:
        with open(path, 'rb') as f:
            return f.read()
    except (IOError, OSError) as err:
        raise TaskOutputError("Can't read output mount %s at '%s': %s"
                              % (mp, path, err))


def materialize(partition, mp, temp_space, task_dir):
    """
    Write a partition where a container expects it

    @param partition: the partition to write
    @type partition: L{cmr.dataset.Partition}
    @param mp: the input mount point
    @type mp: L{MountPoint}
    @param temp_space: temp space the task directory belongs to
    @type temp_space: L{cmr.tmpfile.TempSpace}
    @param task_dir: fresh task directory
    @returns: host path to bind to I{mp.container_path}
    @raises CmrIOError: the task directory can't be written
    """
    what = "partition %d to %s" % (partition.id, mp)
    path = _host_path(mp, task_dir, 'in')
    if mp.is_text:
        data = join_text(partition, mp.separator)
        temp_space.reserve(len(data), what)
        _makedirs(os.path.dirname(path), what)
        _write(path, data, temp_space, what)
    else:
        temp_space.reserve(partition.nbytes, what)
        _makedirs(path, what)
        for idx, record in enumerate(partition.records):
            _write(os.path.join(path, PART_NAME % idx), record, temp_space, what)
    cmr.log.debug("Materialized %r at '%s'" % (partition, path))
    return path


def prepare_output(mp, task_dir):
    """
    Create the empty output file or directory a task writes to

    @returns: host path to bind to I{mp.container_path}
    @raises CmrIOError: the task directory can't be written
    """
    what = "output %s" % mp
    path = _host_path(mp, task_dir, 'out')
    _makedirs(os.path.dirname(path), what)
    if mp.is_text:
        _write(path, b'', None, what)
    else:
        _makedirs(path, what)
    return path


def collect_output(mp, host_path):
    """
    Read records back from an output mount

    A missing output gives no records, the command might just not have
    produced anything for this partition.

    @returns: the records
    @rtype: C{list} of C{bytes}
    @raises TaskOutputError: the output has the wrong shape or can't be read
    """
    if not os.path.lexists(host_path):
        cmr.log.warn("Output mount %s produced nothing at '%s'" % (mp, host_path))
        return []
    if mp.is_text:
        if os.path.isdir(host_path):
            raise TaskOutputError("Output mount %s is declared a file but '%s' is a directory"
                                  % (mp, host_path))
        return split_records(_read(host_path, mp), mp.separator)

    if not os.path.isdir(host_path):
        raise TaskOutputError("Output mount %s is declared a directory but '%s' is not one"
                              % (mp, host_path))
    try:
        names = sorted(os.listdir(host_path))
    except OSError as err:
        raise TaskOutputError("Can't list output mount %s at '%s': %s"
                              % (mp, host_path, err))
    records = []
    # only regular files at depth 1 count as records
    for name in names:
        path = os.path.join(host_path, name)
        if not os.path.isfile(path):
            cmr.log.debug("Ignoring '%s' in output mount %s" % (path, mp))
            continue
        records.append(_read(path, mp))
    return records

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
