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
"""Run container tasks through the container engine's command line"""

import os
import threading
import uuid

import cmr.log
from cmr.command_wrappers import CommandExecFailed, CommandTimedOut, DockerCommand
from cmr.errors import BackendUnavailable
from cmr.executor import Backend, TaskOutcome


class ImageCache(object):
    """Images known to be present locally, safe to share between threads"""
    def __init__(self):
        self._lock = threading.Lock()
        self._present = set()

    def __contains__(self, image):
        with self._lock:
            return image in self._present

    def add(self, image):
        with self._lock:
            self._present.add(image)


class DockerBackend(Backend):
    """
    Run tasks with C{docker run --rm}, binds as volumes and the command
    under C{sh -c}. Containers run as the invoking user so the host can
    remove what they write to the output mounts.
    """
    name = 'container'
    probe_timeout = 10

    def __init__(self, pull_policy='if-not-present', engine='docker'):
        self.pull_policy = pull_policy
        self.engine = engine
        self.images = ImageCache()
        self._pull_lock = threading.Lock()

    def available(self):
        cmd = DockerCommand('version', ['--format', '{{.Server.Version}}'],
                            engine=self.engine, timeout=self.probe_timeout)
        try:
            ret = cmd.call([])
        except CommandExecFailed as err:
            cmr.log.debug("%s not usable: %s" % (self.engine, err))
            return False
        if ret:
            cmr.log.debug("%s daemon not reachable: %s" %
                          (self.engine, cmd.stderr.decode('utf-8', 'replace').strip()))
        return ret == 0

    def _image_present(self, image):
        if image in self.images:
            return True
        cmd = DockerCommand('image', ['inspect', image], engine=self.engine)
        try:
            present = cmd.call([]) == 0
        except CommandExecFailed as err:
            raise BackendUnavailable("Can't run %s: %s" % (self.engine, err))
        if present:
            self.images.add(image)
        return present

    def ensure_image(self, image):
        """Make sure I{image} is there according to the pull policy"""
        if not image:
            raise BackendUnavailable("The container backend needs an image name")
        with self._pull_lock:
            if self.pull_policy == 'always' and image not in self.images:
                self._pull(image)
            elif not self._image_present(image):
                if self.pull_policy == 'never':
                    raise BackendUnavailable("Image '%s' not present and pull policy is 'never'"
                                             % image)
                self._pull(image)

    def _pull(self, image):
        cmr.log.info("Pulling image '%s'" % image)
        cmd = DockerCommand('pull', [image], engine=self.engine)
        try:
            cmd(quiet=True)
        except CommandExecFailed as err:
            raise BackendUnavailable("Image '%s' is not present and can't be pulled: %s"
                                     % (image, err))
        self.images.add(image)

    def run_args(self, task, name):
        args = ['--rm', '--name', name]
        if hasattr(os, 'getuid'):
            args += ['--user', '%d:%d' % (os.getuid(), os.getgid())]
        for bind in task.binds:
            volume = '%s:%s' % (os.path.abspath(bind.host_path), bind.container_path)
            if bind.read_only:
                volume += ':ro'
            args += ['-v', volume]
        for key, value in task.env:
            args += ['-e', '%s=%s' % (key, value)]
        if task.cpu_limit:
            args += ['--cpus', str(task.cpu_limit)]
        args += ['--entrypoint', 'sh', task.image, '-c', task.command]
        return args

    def _kill(self, name):
        try:
            DockerCommand('kill', [name], engine=self.engine, stoppable=False).call([])
        except CommandExecFailed:
            pass

    def run(self, task):
        self.ensure_image(task.image)
        name = 'cmr-%s' % uuid.uuid4().hex[:12]
        cmd = DockerCommand('run', self.run_args(task, name), engine=self.engine,
                            timeout=task.timeout)
        cmr.log.debug("Running %s in container %s from %s" % (task.label, name, task.image))
        try:
            cmd.call([])
        except CommandTimedOut:
            self._kill(name)
            return self.check_outcome(task, TaskOutcome(None, cmd.stdout, cmd.stderr,
                                                        cmd.wall_time))
        except CommandExecFailed as err:
            raise BackendUnavailable("Can't run %s: %s" % (self.engine, err))
        # 125 means the engine itself failed to start the container
        if cmd.retcode == 125:
            raise BackendUnavailable("%s couldn't start %s: %s" %
                                     (self.engine, task.label,
                                      cmd.stderr.decode('utf-8', 'replace').strip()))
        return self.check_outcome(task, TaskOutcome(cmd.retcode, cmd.stdout,
                                                    cmd.stderr, cmd.wall_time))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
