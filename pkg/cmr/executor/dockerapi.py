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
Run container tasks through the engine's HTTP API, needs the optional
C{docker} SDK (C{pip install cmr[api]})
"""

import os
import time

import cmr.log
from cmr.errors import BackendUnavailable
from cmr.executor import Backend, TaskOutcome
from cmr.executor.docker import ImageCache


class DockerApiBackend(Backend):
    """Same contract as L{cmr.executor.docker.DockerBackend}, over the socket"""
    name = 'container'

    def __init__(self, pull_policy='if-not-present'):
        try:
            import docker
        except ImportError:
            raise BackendUnavailable("The api transport needs the docker SDK, "
                                     "install it or use --transport=cli")
        self._docker = docker
        self.pull_policy = pull_policy
        self.images = ImageCache()
        self._client = None

    @property
    def client(self):
        if self._client is None:
            try:
                self._client = self._docker.from_env()
            except self._docker.errors.DockerException as err:
                raise BackendUnavailable("Can't connect to the container engine: %s" % err)
        return self._client

    def available(self):
        try:
            self.client.ping()
        except (BackendUnavailable, self._docker.errors.DockerException) as err:
            cmr.log.debug("Container engine API not reachable: %s" % err)
            return False
        return True

    def ensure_image(self, image):
        errors = self._docker.errors
        if not image:
            raise BackendUnavailable("The container backend needs an image name")
        if image in self.images and self.pull_policy != 'always':
            return
        try:
            if self.pull_policy != 'always':
                try:
                    self.client.images.get(image)
                    self.images.add(image)
                    return
                except errors.ImageNotFound:
                    if self.pull_policy == 'never':
                        raise BackendUnavailable("Image '%s' not present and pull policy is 'never'"
                                                 % image)
            cmr.log.info("Pulling image '%s'" % image)
            self.client.images.pull(image)
        except errors.APIError as err:
            raise BackendUnavailable("Image '%s' is not present and can't be pulled: %s"
                                     % (image, err))
        self.images.add(image)

    def run(self, task):
        errors = self._docker.errors
        self.ensure_image(task.image)
        volumes = dict((os.path.abspath(b.host_path),
                        {'bind': b.container_path, 'mode': 'ro' if b.read_only else 'rw'})
                       for b in task.binds)
        kwargs = {}
        if hasattr(os, 'getuid'):
            kwargs['user'] = '%d:%d' % (os.getuid(), os.getgid())
        if task.cpu_limit:
            kwargs['nano_cpus'] = int(task.cpu_limit * 1e9)
        start = time.time()
        try:
            container = self.client.containers.run(
                task.image, ['-c', task.command], entrypoint='sh',
                volumes=volumes, environment=dict(task.env), detach=True, **kwargs)
        except errors.APIError as err:
            raise BackendUnavailable("Couldn't start %s: %s" % (task.label, err))
        try:
            try:
                result = container.wait(timeout=task.timeout or None)
                exit_code = result.get('StatusCode')
            except Exception as err:
                # the SDK surfaces the timeout as a requests exception
                cmr.log.debug("Waiting for %s failed: %s" % (task.label, err))
                container.kill()
                exit_code = None
            stdout = container.logs(stdout=True, stderr=False)
            stderr = container.logs(stdout=False, stderr=True)
        finally:
            try:
                container.remove(force=True)
            except errors.APIError:
                pass
        return self.check_outcome(task, TaskOutcome(exit_code, stdout, stderr,
                                                    time.time() - start))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
