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
"""Run one of the example pipelines"""

from __future__ import print_function

import os
import sys

import cmr.log
from cmr.demos import DEMOS, coverage_demo, gc_count_demo, screening_demo
from cmr.errors import EXIT_TASK, EXIT_VALIDATION, CmrError
from cmr.pipeline import RunConfig
from cmr.scripts.common import (add_engine_options, add_output_options, new_parser,
                                setup_logging)


def build_parser(name):
    parser = new_parser(name, usage='%%prog [options] %s - run an example pipeline'
                        % '|'.join(DEMOS))
    if not parser:
        return None
    add_engine_options(parser)
    parser.add_option("--workdir", dest="workdir", type='path', default='cmr-demo',
                      help="where corpus, pipeline file and result go, default is 'cmr-demo'")
    parser.add_option("--size", dest="size", type='int', default=0,
                      help="corpus size in bytes, default depends on the demo")
    parser.add_option("--seed", dest="seed", type='int', default=7,
                      help="corpus seed, default is '7'")
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

    if len(args) != 2 or args[1] not in DEMOS:
        cmr.log.err("Need one of the demos %s" % ", ".join(DEMOS))
        return EXIT_VALIDATION

    demo = {'gc': gc_count_demo, 'screening': screening_demo,
            'coverage': coverage_demo}[args[1]]
    kwargs = {'seed': options.seed}
    if options.size:
        kwargs['size_bytes'] = options.size
    try:
        if not os.path.isdir(options.workdir):
            os.makedirs(options.workdir)
        result = demo(options.workdir, RunConfig.from_options(options), **kwargs)
    except CmrError as err:
        cmr.log.err(err)
        return err.exit_code
    except KeyboardInterrupt:
        cmr.log.err("Interrupted. Aborting.")
        return 1

    if result['exit_code']:
        return result['exit_code']
    for line in result['result']:
        print(line)
    if not result['match']:
        cmr.log.err("Result differs from the corpus manifest, expected %s"
                    % result['expected'])
        return EXIT_TASK
    cmr.log.info("Result matches the corpus manifest")
    return 0

if __name__ == '__main__':
    sys.exit(main(sys.argv))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
