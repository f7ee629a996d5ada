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
Command line options of the cmr commands with defaults from config files

Every option has a built in default in L{CmrOptionParser.defaults}. Config
files override it, first their C{[DEFAULT]} section and then the section
named after the command, and the command line overrides both.
"""

import multiprocessing
import os.path
import tempfile
from copy import copy
from optparse import OptionParser, OptionGroup, Option, OptionValueError

from six.moves import configparser

try:
    from cmr.version import cmr_version
except ImportError:
    cmr_version = "[Unknown version]"
import cmr.log

_BOOLEANS = configparser.RawConfigParser.BOOLEAN_STATES


def expand_path(option, opt, value):
    """
    >>> os.environ['CMR_TEST_ROOT'] = '/srv'
    >>> expand_path(None, '--temp-root', '$CMR_TEST_ROOT/tmp')
    '/srv/tmp'
    """
    return os.path.expanduser(os.path.expandvars(value))


def check_intlist(option, opt, value):
    """
    Parse a comma separated list of positive integers

    >>> check_intlist(None, '--pools', '1,2, 4')
    [1, 2, 4]
    """
    try:
        vals = [int(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise OptionValueError("option %s: invalid integer list: %r" % (opt, value))
    if not vals or min(vals) < 1:
        raise OptionValueError("option %s: need positive integers: %r" % (opt, value))
    return vals


def check_color(option, opt, value):
    try:
        return cmr.log.parse_color(value)
    except ValueError as err:
        raise OptionValueError("option %s: %s" % (opt, err))


def default_slots():
    try:
        return multiprocessing.cpu_count()
    except NotImplementedError:
        return 1


class CmrOption(Option):
    TYPES = Option.TYPES + ('path', 'intlist', 'color')
    TYPE_CHECKER = copy(Option.TYPE_CHECKER)
    TYPE_CHECKER['path'] = expand_path
    TYPE_CHECKER['intlist'] = check_intlist
    TYPE_CHECKER['color'] = check_color


class ConfigFileOptions(object):
    """
    Options whose defaults come from the config files, shared by
    L{CmrOptionParser} and L{CmrOptionGroup}
    """
    @property
    def cmr_parser(self):
        return self if isinstance(self, CmrOptionParser) else self.parser

    def add_config_file_option(self, option_name, dest, help=None, **kwargs):
        """
        Add C{--<option_name>}, its default read from the config files

        @param option_name: name of the option in config files
        @param dest: attribute the value is stored in
        @param help: help text, defaults to the one in L{CmrOptionParser.help}
        """
        parser = self.cmr_parser
        if not option_name.startswith('no-'):
            parser.valid_options.append(option_name)
        if help is None:
            help = parser.help[option_name]
        self.add_option("--%s%s" % (parser.prefix, option_name), dest=dest,
                        default=parser.get_default(option_name, **kwargs),
                        help=help % parser.config, **kwargs)

    def add_boolean_config_file_option(self, option_name, dest):
        """Add C{--<option_name>} and C{--no-<option_name>}"""
        self.add_config_file_option(option_name, dest, action="store_true")
        self.add_config_file_option("no-%s" % option_name, dest,
                                    help="negates '--%s%s'" % (self.cmr_parser.prefix,
                                                               option_name),
                                    action="store_false")


class CmrOptionParser(ConfigFileOptions, OptionParser):
    """
    Command line parser of a cmr command

    @ivar command: the command we parse options for, also the config
        file section read
    @ivar prefix: prefix of all long options
    @ivar config: option values after reading the config files
    @type config: C{dict}
    @ivar valid_options: names of all config file options added
    @cvar defaults: built in defaults
    @cvar help: help texts, formatted with the config
    @cvar def_config_files: config files read unless I{CMR_CONF_FILES} is set
    """
    defaults = {'executor'        : 'auto',
                'transport'       : 'cli',
                'pull-policy'     : 'if-not-present',
                'timeout'         : '0',
                'retries'         : '1',
                'workers'         : '1',
                'slots'           : str(default_slots()),
                'temp-root'       : tempfile.gettempdir(),
                'temp-backing'    : 'disk',
                'keep-temp'       : 'False',
                'report'          : '',
                'partitions'      : '0',
                'depth'           : '2',
                'color'           : 'auto',
                'color-scheme'    : '',
                }
    help = {
             'executor':
                 ("Backend running the container tasks: container, "
                  "subprocess or auto, default is '%(executor)s'"),
             'transport':
                 ("How the container backend talks to the engine: cli or api, "
                  "default is '%(transport)s'"),
             'pull-policy':
                 ("When to pull images: if-not-present, always or never, "
                  "default is '%(pull-policy)s'"),
             'timeout':
                 ("Per task timeout in seconds, 0 disables it, "
                  "default is '%(timeout)s'"),
             'retries':
                 ("How often a failed task is retried before giving up, "
                  "default is '%(retries)s'"),
             'workers':
                 "Number of workers in the local pool, default is '%(workers)s'",
             'slots':
                 ("Concurrent task slots per worker, "
                  "default is '%(slots)s'"),
             'temp-root':
                 ("Directory the mount points are materialized in, "
                  "default is '%(temp-root)s'"),
             'temp-backing':
                 ("Whether temp-root is memory backed (memory) or on disk "
                  "(disk), default is '%(temp-backing)s'"),
             'keep-temp':
                 ("Keep task directories for debugging, "
                  "default is '%(keep-temp)s'"),
             'report':
                 "Write the JSON metrics report to this file",
             'partitions':
                 ("Number of partitions at ingestion, 0 means one per slot, "
                  "default is '%(partitions)s'"),
             'depth':
                 "Default tree depth of reduce stages, default is '%(depth)s'",
             'color':
                 "Whether to use colored output, default is '%(color)s'",
             'color-scheme':
                 ("Colors to use in output (when color is enabled), format "
                  "is '<debug>:<info>:<warning>:<error>', e.g. "
                  "'cyan:34::'. Numerical values and color names are "
                  "accepted, empty fields indicate using the default."),
           }

    def_config_files = ['/etc/cmr/cmr.conf',
                        '~/.cmr.conf',
                        '.cmr.conf']

    def __init__(self, command, prefix='', usage=None):
        self.command = command
        self.prefix = prefix
        self.valid_options = []
        self.config = self.read_config()
        OptionParser.__init__(self, option_class=CmrOption,
                              prog="cmr %s" % command, usage=usage,
                              version='%s %s' % (command, cmr_version))

    @classmethod
    def get_config_files(klass, no_local=False):
        """
        Config files to read, from the colon separated I{CMR_CONF_FILES}
        if set

        @param no_local: leave out the files relative to the current
            directory

        >>> conf_backup = os.environ.pop('CMR_CONF_FILES', None)
        >>> homedir = os.path.expanduser("~")
        >>> [f.replace(homedir, 'HOME') for f in CmrOptionParser.get_config_files()]
        ['/etc/cmr/cmr.conf', 'HOME/.cmr.conf', '.cmr.conf']
        >>> [f.replace(homedir, 'HOME') for f in CmrOptionParser.get_config_files(no_local=True)]
        ['/etc/cmr/cmr.conf', 'HOME/.cmr.conf']
        >>> os.environ['CMR_CONF_FILES'] = 'test1:test2'
        >>> CmrOptionParser.get_config_files()
        ['test1', 'test2']
        >>> del os.environ['CMR_CONF_FILES']
        >>> if conf_backup is not None: os.environ['CMR_CONF_FILES'] = conf_backup
        """
        envvar = os.environ.get('CMR_CONF_FILES')
        files = [os.path.expanduser(f)
                 for f in (envvar.split(':') if envvar else klass.def_config_files)]
        if no_local:
            files = [f for f in files if os.path.isabs(f)]
        return files

    def read_config(self):
        """
        Built in defaults updated from the config files

        @rtype: C{dict}
        """
        config = dict(self.__class__.defaults)
        if os.environ.get('TMPDIR'):
            config['temp-root'] = os.environ['TMPDIR']
        parser = configparser.RawConfigParser()
        read = parser.read(self.get_config_files())
        cmr.log.debug("Read config files %s" % read)
        config.update(parser.defaults())
        if parser.has_section(self.command):
            config.update(parser.items(self.command))
        return config

    def get_config_file_value(self, option_name):
        """
        Value of I{option_name} after reading the config files

        @returns: the value or C{None} if there's none
        @rtype: C{str} or C{None}
        """
        return self.config.get(option_name)

    def get_default(self, option_name, **kwargs):
        """
        Default of an option, booleans can be set as I{name} or I{no-name}
        """
        if kwargs.get('action') not in ('store_true', 'store_false'):
            return self.config[option_name]
        name = option_name[3:] if option_name.startswith('no-') else option_name
        value = self.config.get(name)
        if value is None:
            value = self.config["no-%s" % name]
            negate = True
        else:
            negate = False
        try:
            return _BOOLEANS[value.lower()] != negate
        except KeyError:
            raise ValueError("Boolean option '%s' must be true or false, got '%s'"
                             % (name, value))


class CmrOptionGroup(ConfigFileOptions, OptionGroup):
    pass

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
