#!/usr/bin/env python3
import os
import sys
import numpy as np

pythonDir = os.path.abspath(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', '..', '..', 'python'))
if pythonDir not in sys.path:
  sys.path.insert(0, pythonDir)

from fockteleport.coherent_engine import CoherentCombo, TensorCombo


def checkClose(expected, value, tol, label='Value'):
  assert np.allclose(expected, value, atol=tol, rtol=0.0), "{0} {1} "\
          "deviates from {2} by more than {3}".format(label, value, expected, tol)


def checkBelow(value, bound, label='Value'):
  assert np.all(np.less_equal(value, bound)), "{0} {1} "\
          "exceeds {2}".format(label, value, bound)


def checkRaises(errorType, function, *args, **kwargs):
  try:
    function(*args, **kwargs)
  except errorType:
    return
  raise AssertionError("{0} did not raise {1}".format(getattr(function, '__name__', function), errorType.__name__))


def cliEnvironment():
  env = dict(os.environ)
  env['PYTHONPATH'] = pythonDir + os.pathsep + env.get('PYTHONPATH', '')
  return env


def randomModes(rng, count, dim, scale=0.5):
  return scale * (rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))) / np.sqrt(2.0 * dim)


def randomCombo(rng, dim, terms=3, scale=0.5):
  return CoherentCombo(rng.normal(size=terms) + 1j * rng.normal(size=terms), randomModes(rng, terms, dim, scale))


def randomTensor(rng, dim, terms=3, arity=2):
  factors = [randomModes(rng, terms, dim) for _ in range(arity)]
  return TensorCombo(rng.normal(size=terms) + 1j * rng.normal(size=terms), factors)


def runTests(namespace):
  """Runs every test* function of a test script, in definition order."""
  tests = [f for name, f in namespace.items() if name.startswith('test') and callable(f)]
  for test in tests:
    test()
  print('[FockTeleport] {0} tests passed.'.format(len(tests)))
