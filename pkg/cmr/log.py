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
Logging of the cmr engine and commands

Everything goes through the C{cmr} logger. Debug and info records go to
stdout, warnings and errors to stderr, each line looking like
C{cmr:<level>: <message>}. Debug records emitted on a worker thread are
tagged with the thread's name so interleaved task output can be told
apart.
"""

import sys
import logging
import threading
from logging import (DEBUG, INFO, WARNING, ERROR, CRITICAL, getLogger)

ANSI = {'none': 0, 'black': 30, 'red': 31, 'green': 32, 'yellow': 33,
        'blue': 34, 'magenta': 35, 'cyan': 36, 'white': 37}
SCHEME_LEVELS = (DEBUG, INFO, WARNING, ERROR)
DEFAULT_COLOR_SCHEME = {DEBUG: ANSI['cyan'], INFO: ANSI['green'],
                        WARNING: ANSI['yellow'], ERROR: ANSI['red'],
                        CRITICAL: ANSI['red']}

COLOR_MODES = ['on', 'off', 'auto']
_TRUE = ('on', 'true', '1', 'yes')
_FALSE = ('off', 'false', '0', 'no')

LINE_FORMAT = "%(color)s%(name)s:%(levelname)s: %(task)s%(message)s%(coloroff)s"


def parse_color(value):
    """
    Normalize a color setting to one of 'on', 'off' or 'auto'

    >>> parse_color(True)
    'on'
    >>> parse_color('false')
    'off'
    >>> parse_color('Auto')
    'auto'
    >>> parse_color('sometimes')
    Traceback (most recent call last):
    ...
    ValueError: invalid color setting 'sometimes'
    """
    if isinstance(value, bool) or value is None:
        return 'on' if value else 'off'
    value = str(value).lower()
    if value in _TRUE:
        return 'on'
    if value in _FALSE:
        return 'off'
    if value == 'auto':
        return 'auto'
    raise ValueError("invalid color setting '%s'" % value)


def parse_color_scheme(color_scheme):
    """
    Colors per level from a '<debug>:<info>:<warning>:<error>' string.
    Fields are color names or ANSI codes, empty fields keep the default.

    >>> parse_color_scheme('cyan:34::') == {DEBUG: 36, INFO: 34}
    True
    >>> parse_color_scheme('')
    {}
    >>> parse_color_scheme('red')
    Traceback (most recent call last):
    ...
    ValueError: color scheme needs 4 ':' separated fields, got 'red'
    """
    if not color_scheme:
        return {}
    fields = color_scheme.split(':')
    if len(fields) != len(SCHEME_LEVELS):
        raise ValueError("color scheme needs %d ':' separated fields, got '%s'"
                         % (len(SCHEME_LEVELS), color_scheme))
    scheme = {}
    for level, field in zip(SCHEME_LEVELS, fields):
        field = field.strip().lower()
        if field.isdigit():
            scheme[level] = int(field)
        elif field in ANSI:
            scheme[level] = ANSI[field]
    return scheme


class CmrFilter(object):
    """Pass only records of the given levels"""
    def __init__(self, levels):
        self._levels = frozenset(levels)

    def filter(self, record):
        return record.levelno in self._levels


class CmrFormatter(logging.Formatter):
    """
    Lower-case level names, optional ANSI colors and the worker thread
    of debug records
    """
    COLOR_SEQ = "\033[%dm"
    OFF_SEQ = "\033[0m"

    def __init__(self, colorize=None):
        super(CmrFormatter, self).__init__(fmt=LINE_FORMAT)
        self.colorize = colorize or (lambda: False)
        self.scheme = dict(DEFAULT_COLOR_SCHEME)

    def format(self, record):
        record.levelname = record.levelname.lower()
        color = self.scheme.get(record.levelno) if self.colorize() else None
        record.color = self.COLOR_SEQ % color if color else ""
        record.coloroff = self.OFF_SEQ if color else ""
        thread = threading.current_thread()
        if record.levelno == DEBUG and thread is not threading.main_thread():
            record.task = "[%s] " % thread.name
        else:
            record.task = ""
        return super(CmrFormatter, self).format(record)


class CmrStreamHandler(logging.StreamHandler):
    """Stream handler using L{CmrFormatter}"""
    def __init__(self, stream=None, color='auto'):
        super(CmrStreamHandler, self).__init__(stream)
        self.color = parse_color(color)
        self.setFormatter(CmrFormatter(self.use_color))

    def use_color(self):
        if self.color == 'auto':
            isatty = getattr(self.stream, 'isatty', None)
            return bool(isatty and isatty())
        return self.color == 'on'

    def set_color(self, color):
        self.color = parse_color(color)

    def set_color_scheme(self, scheme):
        self.formatter.scheme = dict(DEFAULT_COLOR_SCHEME)
        self.formatter.scheme.update(scheme)


class CmrLogger(logging.Logger):
    """
    Logger with the two default handlers, info and below to stdout and
    the rest to stderr
    """
    def __init__(self, name, *args, **kwargs):
        super(CmrLogger, self).__init__(name, *args, **kwargs)
        routes = ((sys.stdout, (DEBUG, INFO)),
                  (sys.stderr, (WARNING, ERROR, CRITICAL)))
        self._default_handlers = []
        for stream, levels in routes:
            handler = CmrStreamHandler(stream)
            handler.addFilter(CmrFilter(levels))
            self._default_handlers.append(handler)
            self.addHandler(handler)

    def configure(self, color, color_scheme, verbose):
        for handler in self._default_handlers:
            handler.set_color(color)
            handler.set_color_scheme(color_scheme)
        self.setLevel(DEBUG if verbose else INFO)


def err(msg):
    """Log I{msg} as an error"""
    LOGGER.error(msg)


error = err


def warn(msg):
    LOGGER.warning(msg)


warning = warn


def info(msg):
    LOGGER.info(msg)


def debug(msg):
    LOGGER.debug(msg)


def setup(color, verbose, color_scheme=""):
    """
    Configure the default handlers from the command line options

    @param color: 'on', 'off', 'auto' or a boolean
    @param verbose: log debug records too
    @param color_scheme: see L{parse_color_scheme}
    """
    LOGGER.configure(color, parse_color_scheme(color_scheme), verbose)


logging.setLoggerClass(CmrLogger)
LOGGER = getLogger("cmr")
logging.setLoggerClass(logging.Logger)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
