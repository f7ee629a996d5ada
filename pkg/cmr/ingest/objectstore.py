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
"""Object stores records can be ingested from"""

import abc
import os

import six

from cmr.errors import CmrIOError


@six.add_metaclass(abc.ABCMeta)
class ObjectStore(object):
    """Interface which must be implemented by object stores"""

    @abc.abstractmethod
    def list(self, prefix=''):
        """
        Names of all objects starting with I{prefix}

        @rtype: C{list} of C{str}, sorted
        """
        pass

    @abc.abstractmethod
    def get(self, name):
        """
        Contents of an object

        @rtype: C{bytes}
        @raises CmrIOError: object can't be read
        """
        pass


class FilesystemObjectStore(ObjectStore):
    """
    Objects are the files below a root directory, their names the
    slash separated paths relative to it

    >>> FilesystemObjectStore('/nonexistent').list('a/')
    []
    """
    def __init__(self, root):
        self.root = os.path.abspath(root)

    def _path(self, name):
        path = os.path.normpath(os.path.join(self.root, *name.split('/')))
        if os.path.commonprefix([path, self.root + os.sep]) != self.root + os.sep:
            raise CmrIOError("Object name '%s' escapes the store at '%s'" % (name, self.root))
        return path

    def list(self, prefix=''):
        names = []
        for dirpath, dirnames, filenames in os.walk(self.root):
            rel = os.path.relpath(dirpath, self.root)
            for filename in filenames:
                name = filename if rel == os.curdir else '/'.join(rel.split(os.sep) + [filename])
                if name.startswith(prefix):
                    names.append(name)
        return sorted(names)

    def get(self, name):
        path = self._path(name)
        try:
            with open(path, 'rb') as f:
                return f.read()
        except (IOError, OSError) as err:
            raise CmrIOError("Can't read object '%s' at '%s': %s" % (name, path, err))

    def __repr__(self):
        return "<FilesystemObjectStore %s>" % self.root

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
