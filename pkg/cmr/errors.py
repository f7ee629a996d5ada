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
"""Errors raised by the cmr engine and commands"""

# Exit codes of the cmr commands, one per error class
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TASK = 3
EXIT_IO = 4

STDERR_TAIL = 8 * 1024


def stderr_tail(stderr, limit=STDERR_TAIL):
    """
    The last I{limit} bytes of a captured stream, decoded for messages

    >>> stderr_tail(b'abcdef', limit=3)
    'def'
    >>> stderr_tail(None)
    ''
    """
    if not stderr:
        return ''
    return stderr[-limit:].decode('utf-8', 'replace')


class CmrError(Exception):
    """Generic exception raised by cmr"""
    exit_code = EXIT_TASK


class ConfigurationError(CmrError):
    """Invalid configuration or arguments"""
    exit_code = EXIT_VALIDATION


class PipelineValidationError(ConfigurationError):
    """
    A pipeline file failed validation

    @ivar problems: all problems found, as (line, message) tuples, line
        is C{None} if the problem can't be pinned to a line
    """
    def __init__(self, filename, problems):
        self.filename = filename
        self.problems = list(problems)
        super(PipelineValidationError, self).__init__(
            "%s: %d validation error(s)" % (filename, len(self.problems)))

    def format_problems(self):
        lines = []
        for line, msg in self.problems:
            if line is None:
                lines.append("%s: %s" % (self.filename, msg))
            else:
                lines.append("%s:%d: %s" % (self.filename, line, msg))
        return lines


class TaskFailed(CmrError):
    """
    A container task exited nonzero

    @ivar outcome: the L{cmr.executor.TaskOutcome}, if any
    @ivar partition: partition id the task worked on
    @ivar stage: pipeline stage index, if known
    """
    def __init__(self, msg, outcome=None, partition=None, stage=None):
        super(TaskFailed, self).__init__(msg)
        self.outcome = outcome
        self.partition = partition
        self.stage = stage

    @property
    def task_exit_code(self):
        return self.outcome.exit_code if self.outcome else None

    @property
    def stderr(self):
        return stderr_tail(self.outcome.stderr if self.outcome else None)


class TaskTimeout(TaskFailed):
    """A container task was killed after exceeding its timeout"""
    pass


class TaskOutputError(TaskFailed):
    """The output mount doesn't have the declared shape"""
    pass


class LevelFailed(TaskFailed):
    """
    One or more tasks of a level failed after their retries

    @ivar failures: list of (task index, label, exception)
    """
    def __init__(self, failures):
        self.failures = failures
        first = failures[0][2]
        msg = "; ".join([str(err) for _, _, err in failures])
        super(LevelFailed, self).__init__(
            msg,
            outcome=getattr(first, 'outcome', None),
            partition=getattr(first, 'partition', None),
            stage=getattr(first, 'stage', None))


class KeyFunctionError(CmrError):
    """A key function raised on a record"""
    def __init__(self, index, err):
        self.index = index
        super(KeyFunctionError, self).__init__(
            "key function failed on record %d: %s" % (index, err))


class BackendUnavailable(CmrError):
    """The container engine or an image can't be used"""
    pass


class CmrIOError(CmrError):
    """Reading sources or writing results failed"""
    exit_code = EXIT_IO


class TempSpaceExhausted(CmrIOError):
    """Not enough room in a memory backed temp space"""
    pass

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
