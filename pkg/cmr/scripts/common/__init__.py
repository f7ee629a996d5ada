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
"""Parts shared between the cmr commands"""

import os

from six.moves import configparser

import cmr.log
from cmr.config import CmrOptionGroup, CmrOptionParser
from cmr.executor import BACKENDS, PULL_POLICIES, TRANSPORTS
from cmr.tmpfile import BACKINGS


def new_parser(name, usage):
    """A parser for command I{name} with its config file defaults read"""
    try:
        return CmrOptionParser(command=os.path.basename(name), prefix='', usage=usage)
    except configparser.Error as err:
        cmr.log.err(err)
        return None


def setup_logging(options):
    """
    Set up logging as the output options ask for

    @returns: C{False} if the options are unusable, the problem is logged
    """
    try:
        cmr.log.setup(options.color, options.verbose, options.color_scheme)
    except ValueError as err:
        cmr.log.err(err)
        return False
    return True


def add_output_options(parser):
    parser.add_option("-v", "--verbose", action="store_true", dest="verbose", default=False,
                      help="verbose command execution")
    parser.add_config_file_option(option_name="color", dest="color", type='color')
    parser.add_config_file_option(option_name="color-scheme",
                                  dest="color_scheme")


def add_engine_options(parser):
    """Options of everything that runs pipelines"""
    executor_group = CmrOptionGroup(parser, "executor options",
                                    "where and how container tasks run")
    pool_group = CmrOptionGroup(parser, "pool options",
                                "workers, slots and temporary file space")
    parser.add_option_group(executor_group)
    parser.add_option_group(pool_group)

    executor_group.add_config_file_option(option_name="executor", dest="executor",
                                          type='choice', choices=BACKENDS)
    executor_group.add_config_file_option(option_name="transport", dest="transport",
                                          type='choice', choices=TRANSPORTS)
    executor_group.add_config_file_option(option_name="pull-policy", dest="pull_policy",
                                          type='choice', choices=PULL_POLICIES)
    executor_group.add_config_file_option(option_name="timeout", dest="timeout", type='int')
    executor_group.add_config_file_option(option_name="retries", dest="retries", type='int')

    pool_group.add_config_file_option(option_name="workers", dest="workers", type='int')
    pool_group.add_config_file_option(option_name="slots", dest="slots", type='int')
    pool_group.add_config_file_option(option_name="partitions", dest="partitions", type='int')
    pool_group.add_config_file_option(option_name="depth", dest="depth", type='int')
    pool_group.add_config_file_option(option_name="temp-root", dest="temp_root", type='path')
    pool_group.add_config_file_option(option_name="temp-backing", dest="temp_backing",
                                      type='choice', choices=BACKINGS)
    pool_group.add_boolean_config_file_option(option_name="keep-temp", dest="keep_temp")
    parser.add_config_file_option(option_name="report", dest="report", type='path')

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
