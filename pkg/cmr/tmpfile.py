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
"""Temporary file space the mount points are materialized in"""

import os
import shutil
import tempfile
import threading

import cmr.log
from cmr.errors import CmrIOError, ConfigurationError, TempSpaceExhausted

BACKINGS = ('memory', 'disk')


class TempSpace(object):
    """
    A host directory handing out fresh task directories

    A 'memory' backing is a directory the operator asserts to be memory
    backed (e.g. a tmpfs); cmr doesn't mount anything itself.

    @ivar root: host directory the task directories are created in
    @ivar backing: 'memory' or 'disk'
    @ivar keep_temp: don't remove task directories when released
    """
    def __init__(self, root=None, backing='disk', keep_temp=False,
                 prefix='cmr-'):
        if backing not in BACKINGS:
            raise ConfigurationError("Unknown temp space backing '%s', use one of %s"
                                     % (backing, ", ".join(BACKINGS)))
        self.root = os.path.abspath(root or tempfile.gettempdir())
        self.backing = backing
        self.keep_temp = keep_temp
        self.prefix = prefix
        self._lock = threading.Lock()
        self._live = set()
        try:
            if not os.path.exists(self.root):
                os.makedirs(self.root)
        except OSError as err:
            raise CmrIOError("Unable to create temp root %s (%s)" % (self.root, err))

    def new_task_dir(self, label='task'):
        """
        Create a fresh, empty and uniquely named task directory

        @param label: readable part of the directory name
        @returns: the directory's path
        """
        with self._lock:
            try:
                path = tempfile.mkdtemp(dir=self.root,
                                        prefix='%s%s-' % (self.prefix, label))
            except OSError as err:
                raise CmrIOError("Unable to create task dir in %s (%s)" % (self.root, err))
            self._live.add(path)
        return path

    def release(self, path):
        """Remove a task directory unless keep_temp is set"""
        with self._lock:
            self._live.discard(path)
        if self.keep_temp:
            cmr.log.info("Keeping task directory '%s'" % path)
            return
        shutil.rmtree(path, ignore_errors=True)

    @property
    def live(self):
        """Task directories handed out but not yet released"""
        with self._lock:
            return sorted(self._live)

    def free_bytes(self):
        return shutil.disk_usage(self.root).free

    def reserve(self, nbytes, what):
        """
        Check a memory backed temp space can hold I{nbytes} more

        We don't switch to disk on our own, the operator has to pick a
        disk backed temp root.
        """
        if self.backing != 'memory':
            return
        free = self.free_bytes()
        if nbytes > free:
            raise TempSpaceExhausted(
                "Memory backed temp space %s has %d bytes free but %s needs %d, "
                "use --temp-backing=disk with a --temp-root on disk"
                % (self.root, free, what, nbytes))

    def no_space(self, err, what):
        """Turn a failed write into the right error for the backing"""
        if self.backing == 'memory':
            return TempSpaceExhausted(
                "Memory backed temp space %s ran out of space writing %s (%s), "
                "use --temp-backing=disk with a --temp-root on disk"
                % (self.root, what, err))
        return CmrIOError("Failed to write %s: %s" % (what, err))

    def __repr__(self):
        return "<TempSpace %s (%s)>" % (self.root, self.backing)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
