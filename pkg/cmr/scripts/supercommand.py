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
"""Dispatch 'cmr <command>' to the module implementing the command"""

from __future__ import print_function

import os
import pkgutil
import re
import sys

import cmr.scripts
from cmr.errors import EXIT_VALIDATION

# modules under cmr.scripts that aren't commands
NOT_COMMANDS = ('common', 'supercommand')

USAGE = """
Usage:
    cmr <command> [<args>]

The commands are:

%s
Exit codes: 0 ok, 2 invalid configuration or pipeline, 3 task failure
or unusable container engine, 4 I/O error.

Use 'cmr <command> --help' for the options of a command.
"""


def command_modules():
    """
    Names of the modules implementing commands

    >>> sorted(command_modules())
    ['bench', 'corpus', 'demo', 'probe', 'run']
    """
    return [name for _, name, ispkg in pkgutil.iter_modules(cmr.scripts.__path__)
            if not ispkg and name not in NOT_COMMANDS]


def import_command(cmd):
    """
    Import the module that implements the given command

    @raises ImportError: no such command
    """
    modulename = cmd.replace('-', '_')
    if not re.match(r'[a-z][a-z0-9_]+$', modulename) or modulename in NOT_COMMANDS:
        raise ImportError('Illegal module name %s' % modulename)
    return __import__('cmr.scripts.%s' % modulename, fromlist=['main'], level=0)


def describe_commands():
    """One line per command with its summary"""
    cmds = sorted(name.replace('_', '-') for name in command_modules())
    width = max([len(cmd) for cmd in cmds] or [0])
    lines = []
    for cmd in cmds:
        doc = (import_command(cmd).__doc__ or '').strip().splitlines()
        lines.append("    %s - %s" % (cmd.rjust(width), doc[0] if doc else ''))
    return "\n".join(lines) + "\n"


def usage(out=None):
    print(USAGE % describe_commands(), file=out or sys.stdout)


def version(prog):
    try:
        from cmr.version import cmr_version
    except ImportError:
        cmr_version = '[Unknown version]'
    print("%s %s" % (os.path.basename(prog), cmr_version))


def supercommand(argv=None):
    argv = argv or sys.argv
    if len(argv) < 2:
        usage()
        return 1

    cmd = argv[1]
    if cmd in ('--help', '-h', 'help'):
        usage()
        return 0
    if cmd in ('--version', 'version'):
        version(argv[0])
        return 0
    if cmd in ('--list-cmds', 'list-cmds'):
        print(describe_commands())
        return 0

    try:
        module = import_command(cmd)
    except ImportError as err:
        print("'%s' is not a valid command." % cmd, file=sys.stderr)
        usage(sys.stderr)
        if '--verbose' in argv:
            print(err, file=sys.stderr)
        return EXIT_VALIDATION
    # commands see their own name as argv[0]
    return module.main(argv[1:])


if __name__ == '__main__':
    sys.exit(supercommand())

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
