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
"""Weak scaling benchmark of a pipeline file"""

from __future__ import print_function

import sys

import cmr.log
from cmr.bench import format_bench_table, parse_fractions, run_bench, write_csv
from cmr.errors import EXIT_VALIDATION, CmrError, PipelineValidationError
from cmr.pipeline import RunConfig
from cmr.scripts.common import (add_engine_options, add_output_options, new_parser,
                                setup_logging)
from cmr.scripts.run import load_pipeline


def build_parser(name):
    parser = new_parser(name, usage='%prog [options] <pipeline-file> - weak scaling benchmark')
    if not parser:
        return None
    add_engine_options(parser)
    parser.add_option("--pools", dest="pools", type='intlist', default=[1, 2, 4],
                      help="comma separated pool sizes, default is '1,2,4'")
    parser.add_option("--fractions", dest="fractions", default='auto',
                      help="comma separated data fractions paired with the pools, "
                           "'auto' uses pool / largest pool, default is 'auto'")
    parser.add_option("--csv", dest="csv", type='path', default='',
                      help="also write the table as CSV to this file")
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

    if len(args) != 2:
        cmr.log.err("Need exactly one pipeline file")
        return EXIT_VALIDATION

    try:
        spec = load_pipeline(args[1])
        fractions = parse_fractions(options.fractions)
        rows = run_bench(spec, options.pools, fractions, RunConfig.from_options(options))
        print(format_bench_table(rows))
        if options.csv:
            write_csv(rows, options.csv)
            cmr.log.info("Wrote '%s'" % options.csv)
    except CmrError as err:
        if not isinstance(err, PipelineValidationError):
            cmr.log.err(err)
        return err.exit_code
    except KeyboardInterrupt:
        cmr.log.err("Interrupted. Aborting.")
        return 1
    return 0

if __name__ == '__main__':
    sys.exit(main(sys.argv))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
