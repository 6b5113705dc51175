#! /usr/bin/env python3
# Console output with verbosity levels.
#
# A message is printed when its level does not exceed the configured
# verbosity. Warnings and errors go to stderr.

import sys

from .errors import ConfigurationError

verbosityLevels = {'Silent': 0, 'Minimal': 1, 'Normal': 2, 'Detailed': 3}

_verbosity = 'Normal'


def setVerbosity(level):
  global _verbosity
  if level not in verbosityLevels:
    raise ConfigurationError(
        "Verbosity '{0}' not recognized. Use one of: {1}.".format(
            level, ', '.join(verbosityLevels)))
  _verbosity = level


def getVerbosity():
  return _verbosity


def isEnough(level):
  return verbosityLevels[level] <= verbosityLevels[_verbosity]


def logInfo(level, message, *args):
  if not isEnough(level):
    return
  print('[FockTeleport] ' + _render(message, args), flush=True)


def logWarning(level, message, *args):
  if _verbosity == 'Silent' or not isEnough(level):
    return
  print('[FockTeleport] Warning: ' + _render(message, args), file=sys.stderr, flush=True)


def logError(message, *args):
  print('[FockTeleport] Error: ' + _render(message, args), file=sys.stderr, flush=True)


def _render(message, args):
  return message.format(*args) if args else message
