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
"""Generate a synthetic corpus with its manifest"""

from __future__ import print_function

import json
import sys

import cmr.log
from cmr.errors import EXIT_VALIDATION, CmrError
from cmr.ingest.corpus import KINDS, generate_corpus
from cmr.scripts.common import add_output_options, new_parser, setup_logging


def build_parser(name):
    parser = new_parser(name, usage='%%prog [options] %s - generate a corpus'
                        % '|'.join(KINDS))
    if not parser:
        return None
    parser.add_option("--size", dest="size", type='int', default=1 << 20,
                      help="approximate size in bytes, default is '1048576'")
    parser.add_option("--seed", dest="seed", type='int', default=7,
                      help="seed of the generator, default is '7'")
    parser.add_option("--out", dest="out", type='path', default='.',
                      help="output directory, default is the current directory")
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
        cmr.log.err("Need one corpus kind of %s" % ", ".join(KINDS))
        return EXIT_VALIDATION

    try:
        path, manifest = generate_corpus(args[1], options.size, options.seed, options.out)
    except CmrError as err:
        cmr.log.err(err)
        return err.exit_code
    print(path)
    print(json.dumps(manifest['stats'], sort_keys=True))
    return 0

if __name__ == '__main__':
    sys.exit(main(sys.argv))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
