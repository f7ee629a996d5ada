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
"""
Wrappers for the external commands cmr runs: task shells and the
container engine CLI

A L{Command} keeps what its last run left behind (exit status, captured
output and run time) so callers can turn it into a task outcome.
"""

import os
import signal
import subprocess
import threading
import time

import cmr.log as log
from cmr.errors import stderr_tail


class CommandExecFailed(Exception):
    """A command couldn't be started or exited nonzero"""
    pass


class CommandTimedOut(CommandExecFailed):
    """The command was killed after running into its timeout"""
    pass


class CommandInterrupted(CommandTimedOut):
    """The command was killed or refused because the run got interrupted"""
    pass


# children of stoppable commands still running
_running = set()
_running_lock = threading.Lock()
_stopping = threading.Event()


def stop_running():
    """
    Kill the process group of every stoppable command still running

    Stoppable commands started afterwards fail with L{CommandInterrupted}
    until L{resume_running} is called.
    """
    with _running_lock:
        _stopping.set()
        running = list(_running)
    for popen in running:
        Command._kill_group(popen)
    if running:
        log.warn("Killed %d running command(s)" % len(running))


def resume_running():
    _stopping.clear()


def exit_reason(retcode):
    """
    Describe an exit status for error messages

    >>> exit_reason(2)
    'it exited with 2'
    >>> exit_reason(-15)
    'it was terminated by signal 15'
    >>> exit_reason(0)
    ''
    """
    if retcode < 0:
        return "it was terminated by signal %d" % -retcode
    if retcode > 0:
        return "it exited with %d" % retcode
    return ''


class Command(object):
    """
    An external command and the result of its last run

    Output is captured into memory, stdin is closed. The child gets the
    default signal handlers back (SIGPIPE in particular) so shell
    pipelines behave as on a terminal.

    @ivar run_error: message template for failures, C{{err_reason}},
        C{{stdout}} and C{{stderr}} get filled in
    @ivar retcode: exit status of the last run, C{None} if it was killed
        by the timeout or an interrupted run
    @ivar stdout: captured stdout (C{bytes})
    @ivar stderr: captured stderr (C{bytes})
    @ivar err_reason: why the last run failed
    @ivar wall_time: seconds the last run took
    @ivar stoppable: whether L{stop_running} kills and refuses it, cleanup
        commands run regardless
    """
    def __init__(self, cmd, args=[], extra_env=None, cwd=None,
                 capture_stderr=True, capture_stdout=True, timeout=0, stoppable=True):
        self.cmd = cmd
        self.args = list(args)
        self.run_error = "'%s' failed: {err_reason}" % " ".join([cmd] + self.args)
        self.cwd = cwd
        self.timeout = timeout
        self.stoppable = stoppable
        self.env = dict(os.environ, **extra_env) if extra_env is not None else None
        self._pipes = {'stdout': subprocess.PIPE if capture_stdout else None,
                       'stderr': subprocess.PIPE if capture_stderr else None}
        self._clear()

    def _clear(self):
        self.retcode = 1
        self.stdout = self.stderr = b''
        self.err_reason = ''
        self.wall_time = 0.0

    @staticmethod
    def _kill_group(popen):
        """Kill the child and everything it spawned, it leads its own session"""
        try:
            os.killpg(popen.pid, signal.SIGKILL)
        except OSError:
            popen.kill()

    def _run(self, args):
        """
        Run once and record the result

        @returns: the exit status
        @raises OSError: the command couldn't be started
        @raises CommandTimedOut: the timeout expired, the child is killed
        @raises CommandInterrupted: the run is being stopped
        """
        argv = [self.cmd] + self.args + list(args)
        log.debug("Running %s" % argv)
        self._clear()
        start = time.time()
        with _running_lock:
            if self.stoppable and _stopping.is_set():
                self.err_reason = "the run was interrupted"
                raise CommandInterrupted(self.error_message())
            try:
                popen = subprocess.Popen(argv, cwd=self.cwd, env=self.env,
                                         restore_signals=True, start_new_session=True,
                                         stdin=subprocess.DEVNULL, **self._pipes)
            except OSError as err:
                self.err_reason = "execution failed: %s" % err
                raise
            if self.stoppable:
                _running.add(popen)
        try:
            out, err = popen.communicate(timeout=self.timeout or None)
        except subprocess.TimeoutExpired:
            self._kill_group(popen)
            out, err = popen.communicate()
            self.retcode = None
            self.err_reason = "it was killed after %ss timeout" % self.timeout
        else:
            self.retcode = popen.returncode
            self.err_reason = exit_reason(self.retcode)
        finally:
            with _running_lock:
                _running.discard(popen)
        self.wall_time = time.time() - start
        self.stdout, self.stderr = out or b'', err or b''
        if self.retcode is None:
            raise CommandTimedOut(self.error_message())
        if self.retcode < 0 and self.stoppable and _stopping.is_set():
            self.retcode = None
            self.err_reason = "it was killed, the run was interrupted"
            raise CommandInterrupted(self.error_message())
        return self.retcode

    def error_message(self):
        """L{run_error} filled in from the last run"""
        return self.run_error.format(stdout=stderr_tail(self.stdout).rstrip(),
                                     stderr=stderr_tail(self.stderr).rstrip(),
                                     err_reason=self.err_reason)

    def __call__(self, args=[], quiet=False):
        """
        Run the command, any failure raises L{CommandExecFailed}

        @param args: additional arguments
        @type args: C{list} of C{str}
        @param quiet: don't log the failure
        """
        try:
            ret = self._run(args)
        except CommandTimedOut:
            if not quiet:
                log.err(self.error_message())
            raise
        except OSError:
            ret = 1
        if ret:
            if not quiet:
                log.err(self.error_message())
            raise CommandExecFailed(self.error_message())

    def call(self, args, quiet=True):
        """
        Run the command and hand back its exit status

        @param args: additional arguments
        @type args: C{list} of C{str}
        @param quiet: don't log a nonzero exit
        @returns: the exit status
        @rtype: C{int}
        @raises CommandExecFailed: the command couldn't be started
        @raises CommandTimedOut: the timeout expired
        """
        try:
            ret = self._run(args)
        except OSError:
            raise CommandExecFailed(self.err_reason)
        if ret and not quiet:
            log.err(self.error_message())
        return ret


class ShellCommand(Command):
    """A command string run by C{sh -c}, pipes and redirections work"""
    def __init__(self, script, **kwargs):
        super(ShellCommand, self).__init__('sh', ['-c', script], **kwargs)
        self.script = script
        self.run_error = "Task command failed: {err_reason}: {stderr}"


class DockerCommand(Command):
    """A subcommand of the container engine CLI"""
    def __init__(self, cmd, args=[], engine='docker', **kwargs):
        super(DockerCommand, self).__init__(engine, [cmd] + list(args), **kwargs)
        self.run_error = "Couldn't run %s %s: {err_reason}: {stderr}" % (engine, cmd)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
