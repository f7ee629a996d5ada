#!/usr/bin/python
# vim: set fileencoding=utf-8 :
# Copyright (C) 2026 The cmr developers
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
#    <http://www.gnu.org/licenses/>
# END OF COPYRIGHT #

import re
from setuptools import setup, find_packages


def fetch_version():
    """Get the version from cmr/version.py"""
    with open('cmr/version.py') as f:
        match = re.search(r'cmr_version\s*=\s*"([^"]+)"', f.read())
    return match.group(1) if match else "0.0"


def readme():
    with open('README') as file:
        return file.read()

setup(name = "cmr",
      version = fetch_version(),
      author = 'The cmr developers',
      description = 'MapReduce over application containers',
      license = 'GPLv2+',
      long_description = readme(),
      classifiers = [
          'Environment :: Console',
          'Programming Language :: Python :: 3',
          'Topic :: System :: Distributed Computing',
          'Operating System :: POSIX :: Linux',
      ],
      packages = find_packages(exclude=['tests', 'tests.*']),
      data_files = [("/etc/cmr/", ["cmr.conf"]),],
      python_requires = '>=3.6',
      install_requires = ["six"],
      extras_require = {
          'api': ['docker>=4.0'],
          'tests': ['pytest', 'mock', 'coverage>=2.85'],
      },
      tests_require = ['pytest', 'mock', 'coverage>=2.85'],
      entry_points = {
          'console_scripts': [ 'cmr = cmr.scripts.supercommand:supercommand' ],
      },
)
