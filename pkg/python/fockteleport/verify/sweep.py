#! /usr/bin/env python3
# Grid runs over (N, d): channel rows for the perfect, half and full models
# plus the lemma reports of every grid point, written once at the end.

import os
import csv
import json
import multiprocessing as mp

import numpy as np

from ..errors import ResourceLimitError, ConfigurationError
from ..logger import logInfo, logWarning, getVerbosity, setVerbosity
from ..teleport_models import ModelConfig, InputState, channelPerfect, channelHalf, channelFull
from .lemmas import (deviationBound, probabilityBound, theoremDeviation, checkLemmaAlpha, checkLemmaBeta, checkProbabilityFormulas,
                     checkLemmaTheta, checkLemmaZ, checkCoherentNorms, checkExchangeExpansion)
from .theorems import (checkPerfectChannel, checkHalfChannel, checkRawChannel, checkResourceIdentities, checkVacuumIdentities,
                       checkOmegaReduction, checkStagedEquivalence, checkPhaseCovariance, checkGeneralPerfect)

MAX_SWEEP_DIMENSION = 8
MIN_SWEEP_DENSITY = 0.05

CSV_HEADER = ['N', 'd', 'channel', 'n', 'm', 'probability', 'fidelity', 'bound_eq40', 'measured_eq40', 'bound_eq41',
              'measured_eq41', 'passed']
LEMMA_HEADER = ['name', 'N', 'd', 'abs_error', 'tolerance', 'passed']

SWEEP_CHANNELS = [('perfect', channelPerfect), ('half', channelHalf), ('full', channelFull)]


class SweepSpec:

  def __init__(self, nValues, dValues, splitting='half', seed=7, samples=20, phaseMatrix=None, inputSection=None,
               tol=1e-10, allowLarge=False):
    if len(nValues) == 0 or len(dValues) == 0:
      raise ConfigurationError('Sweeps need at least one dimension and one density.')
    if min(dValues) < MIN_SWEEP_DENSITY:
      raise ConfigurationError('Sweep densities must be at least {0}, got {1}.'.format(MIN_SWEEP_DENSITY, min(dValues)))
    if samples < 1:
      raise ConfigurationError('Sweeps need at least one contraction sample, got {0}.'.format(samples))
    large = [n for n in nValues if n > MAX_SWEEP_DIMENSION]
    if large and not allowLarge:
      raise ResourceLimitError('Sweep dimensions {0} exceed N = {1}. Set "Allow Large Dimension" to run them.'.format(large, MAX_SWEEP_DIMENSION))
    if large:
      logWarning('Minimal', 'Running dimensions {0} above N = {1}; Gram matrices grow like N^4.', large, MAX_SWEEP_DIMENSION)

    self.nValues = [int(n) for n in nValues]
    self.dValues = [float(d) for d in dValues]
    self.splitting = splitting
    self.seed = int(seed)
    self.samples = int(samples)
    self.phaseMatrix = phaseMatrix
    self.inputSection = inputSection
    self.tol = tol

  @classmethod
  def fromConfig(cls, config):
    sweep = config['Sweep']
    nValues = sweep['Dimensions'] if len(sweep['Dimensions']) > 0 else [config['Model']['Dimension']]
    return cls(nValues, config['Model']['Density Values'], config['Model']['Splitting'].lower(), config['Random Seed'],
               sweep['Contraction Samples'], config['Model']['Phase Matrix'], config['Input'], config['Tolerances']['Identity'],
               sweep['Allow Large Dimension'])

  def points(self):
    return [(n, index, d) for n in self.nValues for index, d in enumerate(self.dValues)]

  def modelConfig(self, nDim, density):
    document = {
        'Model': {'Dimension': nDim, 'Splitting': self.splitting.capitalize(), 'Phase Matrix': self.phaseMatrix},
        'Tolerances': {'Identity': self.tol},
    }
    return ModelConfig.fromConfig(document, density)

  def inputState(self, nDim):
    # One input per N, shared by all densities
    rng = np.random.default_rng([self.seed, nDim])
    if self.inputSection is None:
      return InputState.random(nDim, rng)
    return InputState.fromConfig({'Input': self.inputSection}, nDim, rng)


class RunRecord:

  def __init__(self, nDim, density, channel, n, m, probability, fidelity, deviationLimit, measuredDeviation,
               probabilityLimit, measuredProbability, passed):
    self.values = dict(zip(CSV_HEADER, [nDim, density, channel, n, m, probability, fidelity, deviationLimit, measuredDeviation,
                                        probabilityLimit, measuredProbability, bool(passed)]))

  def __getitem__(self, key):
    return self.values[key]

  def toRecord(self):
    return dict(self.values)


def _rowPassed(kind, nDim, deviation, deviationLimit, probabilityLimit, tol):
  if kind == 'perfect':
    return abs(deviation['probability'] - 1.0 / nDim**2) <= tol and deviation['fidelity'] >= 1.0 - tol
  if kind == 'half':
    return deviation['fidelity'] >= 1.0 - tol
  return deviation['measured_eq40'] <= deviationLimit and deviation['measured_eq41'] <= probabilityLimit


def lemmaSuite(config, inputState, samples, rng, tol):
  nDim = config.nDim
  return [
      checkLemmaAlpha(config, tol),
      checkLemmaBeta(config, inputState, tol),
      checkProbabilityFormulas(config, inputState, tol),
      checkLemmaTheta(config, inputState, nDim, nDim, samples, rng, tol),
      checkLemmaZ(config, inputState, nDim, nDim, samples, rng, tol),
      checkCoherentNorms(config, tol),
      checkExchangeExpansion(config, tol),
      checkPerfectChannel(config, inputState, tol),
      checkHalfChannel(config, inputState, tol),
      checkRawChannel(config, inputState, tol),
      checkResourceIdentities(config, tol),
      checkVacuumIdentities(config, inputState, tol),
      checkOmegaReduction(config, inputState, tol),
      checkStagedEquivalence(config, inputState, tol),
      checkPhaseCovariance(config, inputState, tol),
      checkGeneralPerfect(config, inputState, tol),
  ]


def evaluatePoint(spec, nDim, index, density):
  """Channel records and lemma reports for one grid point."""
  config = spec.modelConfig(nDim, density)
  inputState = spec.inputState(nDim)
  rng = np.random.default_rng([spec.seed, nDim, index])
  deviationLimit = deviationBound(nDim, density)
  probabilityLimit = probabilityBound(nDim, density)

  records = []
  for kind, channel in SWEEP_CHANNELS:
    for n in range(1, nDim + 1):
      for m in range(1, nDim + 1):
        deviation = theoremDeviation(config, inputState, n, m, spec.samples, rng, channel)
        passed = _rowPassed(kind, nDim, deviation, deviationLimit, probabilityLimit, spec.tol)
        records.append(RunRecord(nDim, density, kind, n, m, deviation['probability'], deviation['fidelity'], deviationLimit,
                                 deviation['measured_eq40'], probabilityLimit, deviation['measured_eq41'], passed))

  reports = lemmaSuite(config, inputState, spec.samples, rng, spec.tol)
  failed = sum(not r['passed'] for r in records) + sum(not r.passed for r in reports)
  logInfo('Normal', 'Grid point N = {0}, d = {1}: {2} channel rows, {3} reports, {4} failed.', nDim, density, len(records),
          len(reports), failed)
  return records, reports


def _evaluateTask(task):
  spec, nDim, index, density, verbosity = task
  setVerbosity(verbosity)
  return evaluatePoint(spec, nDim, index, density)


def runSweep(spec, conduit='Sequential', jobs=2):
  """Evaluates the grid in order (N, d). Returns channel records and lemma reports."""
  tasks = [(spec, nDim, index, density, getVerbosity()) for nDim, index, density in spec.points()]
  if conduit == 'Concurrent' and len(tasks) > 1:
    with mp.Pool(processes=max(1, int(jobs))) as pool:
      results = pool.map(_evaluateTask, tasks)
  else:
    results = [_evaluateTask(task) for task in tasks]

  records = [r for rows, _ in results for r in rows]
  reports = [r for _, rows in results for r in rows]
  return records, reports


def _formatValue(value):
  if isinstance(value, bool):
    return 'true' if value else 'false'
  if isinstance(value, (float, np.floating)):
    return repr(float(value))
  return str(value)


def writeRecords(path, name, rows, header, fmt):
  """Writes `rows` (dicts) to <path>/<name>.csv or .json and returns the file name."""
  os.makedirs(path, exist_ok=True)
  if fmt == 'JSON':
    fileName = os.path.join(path, name + '.json')
    with open(fileName, 'w') as f:
      json.dump(rows, f, indent=2, default=float)
    return fileName

  fileName = os.path.join(path, name + '.csv')
  with open(fileName, 'w', newline='') as f:
    writer = csv.DictWriter(f, fieldnames=header, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    writer.writerows({k: _formatValue(row.get(k, '')) for k in header} for row in rows)
  return fileName


def writeSweep(path, records, reports, fmt='CSV'):
  sweepFile = writeRecords(path, 'sweep', [r.toRecord() for r in records], CSV_HEADER, fmt)
  lemmaFile = writeRecords(path, 'lemmas', [r.toRecord() for r in reports], LEMMA_HEADER, fmt)
  return sweepFile, lemmaFile
