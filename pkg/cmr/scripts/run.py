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
"""Run a pipeline file"""

from __future__ import print_function

import sys

import cmr.log
from cmr.errors import EXIT_VALIDATION, CmrError, PipelineValidationError
from cmr.ledger import format_table
from cmr.pipeline import RunConfig, parse_pipeline, run_pipeline
from cmr.scripts.common import (add_engine_options, add_output_options, new_parser,
                                setup_logging)


def build_parser(name):
    parser = new_parser(name, usage='%prog [options] <pipeline-file> - run a pipeline')
    if not parser:
        return None
    add_engine_options(parser)
    parser.add_option("--show-ledger", action="store_true", dest="show_ledger",
                      default=False, help="print the per operation metrics when done")
    add_output_options(parser)
    return parser


def parse_args(argv):
    parser = build_parser(argv[0])
    if not parser:
        return None, None
    return parser.parse_args(argv)


def load_pipeline(path):
    """Parse a pipeline file, logging every problem found"""
    try:
        return parse_pipeline(path)
    except PipelineValidationError as err:
        for line in err.format_problems():
            cmr.log.err(line)
        raise


def main(argv):
    (options, args) = parse_args(argv)
    if not options:
        return EXIT_VALIDATION

    if not setup_logging(options):
        return EXIT_VALIDATION

    if len(args) != 2:
        cmr.log.err("Need exactly one pipeline file")
        return EXIT_VALIDATION

    try:
        spec = load_pipeline(args[1])
        retval, report = run_pipeline(spec, RunConfig.from_options(options))
    except CmrError as err:
        if not isinstance(err, PipelineValidationError):
            cmr.log.err(err)
        return err.exit_code
    except KeyboardInterrupt:
        cmr.log.err("Interrupted. Aborting.")
        return 1

    if options.show_ledger and 'ledger' in report:
        print(format_table(report['ledger']))
    if retval == 0:
        cmr.log.info("Pipeline '%s' done, result in '%s'" % (args[1], spec.sink.path))
    return retval

if __name__ == '__main__':
    sys.exit(main(sys.argv))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
