#! /usr/bin/env python3
# Configuration documents for fockteleport runs.
#
# A run is described by a nested dictionary with Title-Case keys, e.g.
# config["Console Output"]["Verbosity"] = "Detailed".
# The defaults below are merged under the user document; keys that do not
# exist in the defaults are rejected.

import copy
import json
import numbers

import numpy as np

from .errors import ConfigurationError

DEFAULTS = {
    'Model': {
        'Dimension': 2,
        'Density Values': [1.0, 4.0],
        'Splitting': 'Half',
        'Phase Matrix': None
    },
    'Input': {
        'Type': 'Random',
        'Weights': [],
        'Coefficients': []
    },
    'Sweep': {
        'Dimensions': [],
        'Contraction Samples': 20,
        'Allow Large Dimension': False
    },
    'Conduit': {
        'Type': 'Sequential',
        'Concurrent Jobs': 2
    },
    'Random Seed': 7,
    'Tolerances': {
        'Identity': 1e-10,
        'Oracle': 1e-6,
        'Slope': 0.25
    },
    'File Output': {
        'Path': '_fockteleport_result',
        'Format': 'CSV'
    },
    'Console Output': {
        'Verbosity': 'Normal'
    }
}

OPTIONS = {
    'Model/Splitting': ['Half', 'Orthogonal'],
    'Input/Type': ['Random', 'Explicit'],
    'Conduit/Type': ['Sequential', 'Concurrent'],
    'File Output/Format': ['CSV', 'JSON'],
    'Console Output/Verbosity': ['Silent', 'Minimal', 'Normal', 'Detailed'],
}


def defaultConfig():
  return copy.deepcopy(DEFAULTS)


def _checkType(path, value, default):
  if default is None:
    if value is not None and not isinstance(value, list):
      raise ConfigurationError("'{0}' must be null or a list, got {1}.".format(path, type(value).__name__))
    return
  if isinstance(default, bool):
    ok = isinstance(value, bool)
  elif isinstance(default, int):
    ok = isinstance(value, numbers.Integral) and not isinstance(value, bool)
  elif isinstance(default, float):
    ok = isinstance(value, numbers.Real) and not isinstance(value, bool)
  else:
    ok = isinstance(value, type(default))
  if not ok:
    raise ConfigurationError("'{0}' expects a value of type {1}, got {2}.".format(
        path, type(default).__name__, type(value).__name__))
  if path in OPTIONS and value not in OPTIONS[path]:
    raise ConfigurationError("'{0}' must be one of {1}, got '{2}'.".format(path, OPTIONS[path], value))


def applyDefaults(document, defaults=DEFAULTS, path=''):
  """
  Returns a new configuration with `defaults` filled in under `document`.

  Raises ConfigurationError naming the full key path of any unknown key or
  of any value whose type does not match the default.
  """
  if not isinstance(document, dict):
    raise ConfigurationError("'{0}' must be an object.".format(path or '/'))
  merged = copy.deepcopy(defaults)
  for key, value in document.items():
    keyPath = key if path == '' else path + '/' + key
    if key not in defaults:
      raise ConfigurationError("Unrecognized key '{0}'.".format(keyPath))
    if isinstance(defaults[key], dict):
      merged[key] = applyDefaults(value, defaults[key], keyPath)
    else:
      _checkType(keyPath, value, defaults[key])
      merged[key] = copy.deepcopy(value)
  return merged


def loadConfig(path=None):
  if path is None:
    return defaultConfig()
  try:
    with open(path) as f:
      document = json.load(f)
  except OSError as e:
    raise ConfigurationError("Could not read configuration file '{0}': {1}".format(path, e.strerror))
  except json.JSONDecodeError as e:
    raise ConfigurationError("Configuration file '{0}' is not valid JSON: {1}".format(path, e))
  return applyDefaults(document)


def applyOverrides(config, seed=None, out=None, fmt=None, tol=None):
  config = copy.deepcopy(config)
  if seed is not None:
    config['Random Seed'] = int(seed)
  if out is not None:
    config['File Output']['Path'] = out
  if fmt is not None:
    fmt = fmt.upper()
    _checkType('File Output/Format', fmt, DEFAULTS['File Output']['Format'])
    config['File Output']['Format'] = fmt
  if tol is not None:
    if tol <= 0.0:
      raise ConfigurationError("Tolerance must be positive, got {0}.".format(tol))
    config['Tolerances']['Identity'] = float(tol)
  return config


def parseComplex(value, path='value'):
  if isinstance(value, numbers.Real) and not isinstance(value, bool):
    return complex(value)
  if isinstance(value, (list, tuple)) and len(value) == 2 and all(
      isinstance(v, numbers.Real) and not isinstance(v, bool) for v in value):
    return complex(value[0], value[1])
  raise ConfigurationError("'{0}' must be a real number or a [re, im] pair, got {1}.".format(path, value))


def parseComplexMatrix(rows, path='matrix'):
  if not isinstance(rows, list) or len(rows) == 0:
    raise ConfigurationError("'{0}' must be a non-empty list of rows.".format(path))
  width = None
  parsed = []
  for i, row in enumerate(rows):
    if not isinstance(row, list):
      raise ConfigurationError("'{0}' row {1} is not a list.".format(path, i))
    if width is None:
      width = len(row)
    if len(row) != width:
      raise ConfigurationError("'{0}' has rows of different lengths.".format(path))
    parsed.append([parseComplex(v, '{0}[{1}][{2}]'.format(path, i, j)) for j, v in enumerate(row)])
  return np.array(parsed, dtype=complex)
