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
"""Run container tasks as host subprocesses, no container engine needed"""

import re

from six.moves import shlex_quote

import cmr.log
from cmr.command_wrappers import CommandExecFailed, CommandTimedOut, ShellCommand
from cmr.errors import BackendUnavailable
from cmr.executor import Backend, TaskOutcome


def substitute_paths(command, binds):
    """
    Replace each bound container path in a command by its host path.
    Longer container paths go first and a path only matches as a whole
    path component, so '/in' doesn't touch '/in.sdf' or '/ref/in'.

    >>> from cmr.executor import Bind
    >>> substitute_paths("wc -l < /in > /out", [Bind('/h/a', '/in', True),
    ...                                         Bind('/h/b', '/out', False)])
    'wc -l < /h/a > /h/b'
    >>> substitute_paths("cat /in.sdf /in/x", [Bind('/h/a', '/in', True)])
    'cat /in.sdf /h/a/x'
    >>> substitute_paths("cat /in", [Bind('/h/my dir', '/in', True)])
    "cat '/h/my dir'"
    """
    binds = sorted(binds, key=lambda b: len(b.container_path), reverse=True)
    if not binds:
        return command
    hosts = dict((b.container_path, shlex_quote(b.host_path)) for b in binds)
    pattern = re.compile(r'(?<![\w./-])(%s)(?![\w.-])' %
                         '|'.join(re.escape(b.container_path) for b in binds))
    return pattern.sub(lambda m: hosts[m.group(1)], command)


class SubprocessBackend(Backend):
    """
    Run the task command with C{sh -c} on the host, with container paths
    textually replaced by their host paths. Commands need to spell the
    mount paths verbatim for this to work.
    """
    name = 'subprocess'

    def available(self):
        return True

    def run(self, task):
        script = substitute_paths(task.command, task.binds)
        env = dict(task.env)
        cmd = ShellCommand(script, extra_env=env, timeout=task.timeout)
        cmr.log.debug("Running %s as subprocess: %s" % (task.label, script))
        try:
            cmd.call([])
        except CommandTimedOut:
            return self.check_outcome(task, TaskOutcome(None, cmd.stdout, cmd.stderr,
                                                        cmd.wall_time))
        except CommandExecFailed as err:
            raise BackendUnavailable("Can't run the task shell: %s" % err)
        return self.check_outcome(task, TaskOutcome(cmd.retcode, cmd.stdout,
                                                    cmd.stderr, cmd.wall_time))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
