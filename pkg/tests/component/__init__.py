# vim: set fileencoding=utf-8 :
#
# (C) 2026 The cmr developers
#
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
"""
End to end runs of the shipped pipelines on generated corpora, with the
subprocess backend unless a test asks for a container engine
"""

import os
import shutil
import tempfile
import unittest

import mock

from .. testutils import CmrLogTester
from cmr.pipeline import RunConfig


class ComponentTestBase(unittest.TestCase, CmrLogTester):
    """
    Every test runs in its own scratch directory (I{_tmpdir}), which is
    also the current directory, with no config files read
    """
    @classmethod
    def setUpClass(cls):
        cls._tmproot = tempfile.mkdtemp(prefix='cmr_%s_' % cls.__name__)
        cls._env = mock.patch.dict(os.environ, {
            'CMR_CONF_FILES': os.path.join(cls._tmproot, 'none.conf')})
        cls._env.start()

    @classmethod
    def tearDownClass(cls):
        cls._env.stop()
        if not os.getenv("CMR_TESTS_NOCLEAN"):
            shutil.rmtree(cls._tmproot, ignore_errors=True)

    def __init__(self, methodName='runTest'):
        unittest.TestCase.__init__(self, methodName)
        CmrLogTester.__init__(self)
        self._tmpdir = None

    def setUp(self):
        self._tmpdir = tempfile.mkdtemp(prefix='%s_' % self._testMethodName,
                                        dir=self._tmproot)
        self.addCleanup(os.chdir, os.getcwd())
        os.chdir(self._tmpdir)
        self._capture_log(True)
        self.addCleanup(self._capture_log, False)

    @property
    def temp_root(self):
        """Where the task directories of L{config} go"""
        return os.path.join(self._tmpdir, 'temp')

    def config(self, **kwargs):
        """A subprocess run configuration, two workers with two slots each"""
        if not os.path.isdir(self.temp_root):
            os.makedirs(self.temp_root)
        values = dict(executor='subprocess', workers=2, slots=2, temp_root=self.temp_root)
        values.update(kwargs)
        return RunConfig(**values)

    def check_temp_empty(self):
        self.assertEqual(os.listdir(self.temp_root), [],
                         "Task directories left in %s" % self.temp_root)
