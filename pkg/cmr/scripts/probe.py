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
"""Report which executor backends are usable"""

from __future__ import print_function

import sys

import cmr.log
from cmr.config import CmrOptionGroup
from cmr.errors import EXIT_VALIDATION, CmrError
from cmr.executor import BACKENDS, PULL_POLICIES, TRANSPORTS, probe_backend
from cmr.scripts.common import add_output_options, new_parser, setup_logging


def build_parser(name):
    parser = new_parser(name, usage='%prog [options] - report usable executor backends')
    if not parser:
        return None
    executor_group = CmrOptionGroup(parser, "executor options",
                                    "where and how container tasks run")
    parser.add_option_group(executor_group)
    executor_group.add_config_file_option(option_name="executor", dest="executor",
                                          type='choice', choices=BACKENDS)
    executor_group.add_config_file_option(option_name="transport", dest="transport",
                                          type='choice', choices=TRANSPORTS)
    executor_group.add_config_file_option(option_name="pull-policy", dest="pull_policy",
                                          type='choice', choices=PULL_POLICIES)
    add_output_options(parser)
    return parser


def parse_args(argv):
    parser = build_parser(argv[0])
    if not parser:
        return None, None
    return parser.parse_args(argv)


def main(argv):
    (options, args) = parse_args(argv)
    if not options:
        return EXIT_VALIDATION

    if not setup_logging(options):
        return EXIT_VALIDATION

    try:
        report = probe_backend(options.executor, options.transport, options.pull_policy)
    except CmrError as err:
        cmr.log.err(err)
        return err.exit_code

    for key in ('container', 'subprocess', 'selected'):
        print("%s: %s" % (key, report[key] or 'none'))
    return 0

if __name__ == '__main__':
    sys.exit(main(sys.argv))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
