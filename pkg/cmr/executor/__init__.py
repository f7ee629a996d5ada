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
"""Run container tasks on a container engine or as plain subprocesses"""

import collections
import posixpath

import cmr.log
from cmr.errors import (BackendUnavailable, ConfigurationError, TaskFailed,
                        TaskTimeout, stderr_tail)

BACKENDS = ('container', 'subprocess', 'auto')
TRANSPORTS = ('cli', 'api')
PULL_POLICIES = ('if-not-present', 'always', 'never')


Bind = collections.namedtuple('Bind', ['host_path', 'container_path', 'read_only'])


class ContainerTask(object):
    """
    A shell command run from an image against bound mounts

    @ivar image: image name, ignored by the subprocess backend
    @ivar command: shell command, run under C{sh -c}
    @ivar binds: list of L{Bind}
    @ivar env: list of (name, value) pairs
    @ivar timeout: seconds, 0 means no timeout
    @ivar cpu_limit: optional number of CPUs
    @ivar label: name used in logs and errors
    """
    def __init__(self, image, command, binds=(), env=(), timeout=0,
                 cpu_limit=None, label='task'):
        self.image = image
        self.command = command
        self.binds = [Bind(*b) for b in binds]
        self.env = list(env)
        self.timeout = timeout
        self.cpu_limit = cpu_limit
        self.label = label
        seen = set()
        for bind in self.binds:
            if not posixpath.isabs(bind.container_path):
                raise ConfigurationError("Container path must be absolute: %r"
                                         % bind.container_path)
            if bind.container_path in seen:
                raise ConfigurationError("Container path %s bound twice in %s"
                                         % (bind.container_path, label))
            seen.add(bind.container_path)
        if cpu_limit is not None and cpu_limit < 1:
            raise ConfigurationError("cpu limit must be positive, got %s" % cpu_limit)

    def __repr__(self):
        return "<ContainerTask %s: %s %r>" % (self.label, self.image, self.command)


class TaskOutcome(object):
    """
    What a finished task left behind

    @ivar exit_code: exit status, C{None} if killed by the timeout
    @ivar stdout: captured stdout, diagnostics only
    @ivar stderr: captured stderr, diagnostics only
    @ivar wall_time: seconds
    """
    def __init__(self, exit_code, stdout=b'', stderr=b'', wall_time=0.0):
        self.exit_code = exit_code
        self.stdout = stdout
        self.stderr = stderr
        self.wall_time = wall_time

    @property
    def timed_out(self):
        return self.exit_code is None

    def __repr__(self):
        return "<TaskOutcome exit %s in %.3fs>" % (self.exit_code, self.wall_time)


class Backend(object):
    """Interface of the task backends"""
    name = None

    def run(self, task):
        """
        Run a task to completion

        @returns: the outcome of a successful run
        @rtype: L{TaskOutcome}
        @raises TaskFailed: nonzero exit status
        @raises TaskTimeout: the task ran into its timeout
        @raises BackendUnavailable: the engine or image can't be used
        """
        raise NotImplementedError

    def available(self):
        raise NotImplementedError

    def check_outcome(self, task, outcome):
        """Raise the right error for a failed outcome"""
        if outcome.timed_out:
            raise TaskTimeout("%s killed after %ss timeout: %s" %
                              (task.label, task.timeout, stderr_tail(outcome.stderr)),
                              outcome=outcome)
        if outcome.exit_code != 0:
            raise TaskFailed("%s exited with %d: %s" %
                             (task.label, outcome.exit_code,
                              stderr_tail(outcome.stderr).rstrip()),
                             outcome=outcome)
        return outcome


def _container_backend(transport='cli', pull_policy='if-not-present', engine='docker'):
    if transport not in TRANSPORTS:
        raise ConfigurationError("Unknown transport '%s', use one of %s"
                                 % (transport, ", ".join(TRANSPORTS)))
    if transport == 'api':
        from cmr.executor.dockerapi import DockerApiBackend
        return DockerApiBackend(pull_policy=pull_policy)
    from cmr.executor.docker import DockerBackend
    return DockerBackend(pull_policy=pull_policy, engine=engine)


def _check_choice(value, choices, what):
    if value not in choices:
        raise ConfigurationError("Unknown %s '%s', use one of %s"
                                 % (what, value, ", ".join(choices)))


def probe_backend(backend='auto', transport='cli', pull_policy='if-not-present',
                  engine='docker'):
    """
    Report which backends can be used and which one will be

    @returns: dict with the keys 'container', 'subprocess' (each
        'available' or 'unavailable') and 'selected'
    """
    from cmr.executor.local import SubprocessBackend

    _check_choice(backend, BACKENDS, 'executor backend')
    report = {'subprocess': 'available' if SubprocessBackend().available() else 'unavailable'}
    if backend == 'subprocess':
        report['container'] = 'not probed'
        report['selected'] = 'subprocess'
        return report
    try:
        container_ok = _container_backend(transport, pull_policy, engine).available()
    except (BackendUnavailable, ConfigurationError) as err:
        cmr.log.debug("Container backend unusable: %s" % err)
        container_ok = False
    report['container'] = 'available' if container_ok else 'unavailable'
    if backend == 'container':
        report['selected'] = 'container' if container_ok else None
    else:
        report['selected'] = 'container' if container_ok else 'subprocess'
    return report


def get_backend(backend='auto', transport='cli', pull_policy='if-not-present',
                engine='docker'):
    """
    Instantiate the task backend the configuration asks for

    @raises BackendUnavailable: container backend forced but not reachable
    """
    from cmr.executor.local import SubprocessBackend

    _check_choice(backend, BACKENDS, 'executor backend')
    _check_choice(pull_policy, PULL_POLICIES, 'pull policy')
    if backend == 'subprocess':
        return SubprocessBackend()
    container = _container_backend(transport, pull_policy, engine)
    if container.available():
        return container
    if backend == 'container':
        raise BackendUnavailable("Container engine is not reachable")
    cmr.log.info("No container engine reachable, using the subprocess backend")
    return SubprocessBackend()

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
