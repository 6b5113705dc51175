#! /usr/bin/env python3
import sys
import argparse

import numpy as np

from ..errors import FockTeleportError, ConfigurationError
from ..logger import logInfo, logWarning, logError, setVerbosity
from ..config import loadConfig, applyOverrides
from ..teleport_models import STAGE_NAMES, channelFull, stagedProcedure
from ..fock_oracle import MAX_ORACLE_DENSITY, oracleChannelCheck, oracleHalfAggregate
from .lemmas import LemmaReport, checkTheoremBounds, checkAsymptoticSlope, halfProbabilitySum
from .theorems import checkOperatorProperties, checkStagedLimit
from .sweep import SweepSpec, LEMMA_HEADER, runSweep, lemmaSuite, writeRecords, writeSweep

LIMIT_DENSITY = 50.0
ORACLE_HEADER = ['name', 'N', 'd', 'n', 'm', 'cutoff', 'dim', 'tail', 'tolerance', 'deviation', 'passed']
STAGED_HEADER = ['N', 'd', 'n', 'm', 'step', 'stage', 's', 'norm']


def _summarize(label, passed, total):
  logInfo('Minimal', '{0}: {1} of {2} checks passed.', label, passed, total)
  return 0 if passed == total else 1


def runVerify(config):
  spec = SweepSpec.fromConfig(config)
  tol = config['Tolerances']['Identity']
  reports = []
  for nDim, index, density in spec.points():
    model = spec.modelConfig(nDim, density)
    inputState = spec.inputState(nDim)
    rng = np.random.default_rng([spec.seed, nDim, index])
    logInfo('Normal', 'Verifying N = {0}, d = {1}...', nDim, density)
    reports += lemmaSuite(model, inputState, spec.samples, rng, tol)
    reports.append(checkTheoremBounds(model, inputState, spec.samples, rng, tol))
    reports.append(checkOperatorProperties(model, rng, tol=tol))

  for nDim in spec.nValues:
    inputState = spec.inputState(nDim)
    model = spec.modelConfig(nDim, LIMIT_DENSITY)
    reports.append(checkStagedLimit(model, inputState, tol=1e-6))
    reports.append(checkAsymptoticSlope(spec.modelConfig(nDim, 8.0), inputState, tol=config['Tolerances']['Slope']))

  for report in reports:
    logInfo('Normal', report.summary())
  fileName = writeRecords(config['File Output']['Path'], 'verify', [r.toRecord() for r in reports], LEMMA_HEADER,
                          config['File Output']['Format'])
  logInfo('Normal', 'Reports written to {0}.', fileName)
  return _summarize('verify', sum(r.passed for r in reports), len(reports))


def runSweepCommand(config):
  spec = SweepSpec.fromConfig(config)
  records, reports = runSweep(spec, config['Conduit']['Type'], config['Conduit']['Concurrent Jobs'])
  sweepFile, lemmaFile = writeSweep(config['File Output']['Path'], records, reports, config['File Output']['Format'])
  logInfo('Normal', 'Channel rows written to {0}, lemma reports to {1}.', sweepFile, lemmaFile)
  passed = sum(r['passed'] for r in records) + sum(r.passed for r in reports)
  return _summarize('sweep', passed, len(records) + len(reports))


def runStaged(config, n=None, m=None):
  spec = SweepSpec.fromConfig(config)
  rows = []
  passed = 0
  total = 0
  for nDim, _, density in spec.points():
    model = spec.modelConfig(nDim, density)
    inputState = spec.inputState(nDim)
    n0 = nDim if n is None else n
    m0 = nDim if m is None else m
    staged = stagedProcedure(model, inputState, n0, m0, applyKey=True)
    full = channelFull(model, inputState, n0, m0)

    logInfo('Normal', 'Staged procedure N = {0}, d = {1}, n = {2}, m = {3}, probability {4:.12e}', nDim, density, n0, m0,
            staged.channel.probability)
    for step, name in enumerate(STAGE_NAMES):
      norms = staged.stepNorms[step]
      logInfo('Normal', '  Step {0} {1:<34} {2}', step, name, ' '.join('{0:.6e}'.format(v) for v in norms))
      rows += [{'N': nDim, 'd': density, 'n': n0, 'm': m0, 'step': step, 'stage': name, 's': s + 1, 'norm': float(v)}
               for s, v in enumerate(norms)]

    total += 1
    if abs(staged.channel.probability - full.probability) <= spec.tol:
      passed += 1
    else:
      logWarning('Minimal', 'Staged probability {0:.12e} differs from the full channel {1:.12e}.', staged.channel.probability,
                 full.probability)

  fileName = writeRecords(config['File Output']['Path'], 'staged', rows, STAGED_HEADER, config['File Output']['Format'])
  logInfo('Normal', 'Step norms written to {0}.', fileName)
  return _summarize('staged', passed, total)


def runOracleCheck(config, cutoff=None):
  spec = SweepSpec.fromConfig(config)
  tol = config['Tolerances']['Oracle']
  rows = []
  passed = 0
  for nDim, _, density in spec.points():
    if density > MAX_ORACLE_DENSITY:
      logWarning('Normal', 'Skipping d = {0}: oracle runs need d <= {1}.', density, MAX_ORACLE_DENSITY)
      continue
    model = spec.modelConfig(nDim, density)
    inputState = spec.inputState(nDim)
    tail = 0.0
    for n in range(1, nDim + 1):
      for m in range(1, nDim + 1):
        report = oracleChannelCheck(model, inputState, n, m, cutoff, tol)
        tail = max(tail, report.tail)
        rows.append(dict(report.toRecord(), name='oracle channel'))
        passed += report.passed

    aggregate = oracleHalfAggregate(model, inputState, cutoff)
    check = LemmaReport('oracle half sum', aggregate, halfProbabilitySum(nDim, density), max(tol, 100.0 * tail), nDim=nDim,
                        density=density)
    logInfo('Normal', check.summary())
    rows.append(dict(check.toRecord(), deviation=check.absError))
    passed += check.passed

  if len(rows) == 0:
    raise ConfigurationError('No density value is small enough for the oracle (d <= {0}).'.format(MAX_ORACLE_DENSITY))
  fileName = writeRecords(config['File Output']['Path'], 'oracle', rows, ORACLE_HEADER, config['File Output']['Format'])
  logInfo('Normal', 'Oracle comparisons written to {0}.', fileName)
  return _summarize('oracle-check', passed, len(rows))


def main(command, configFile=None, seed=None, out=None, fmt=None, tol=None, n=None, m=None, cutoff=None):
  try:
    config = applyOverrides(loadConfig(configFile), seed, out, fmt, tol)
    setVerbosity(config['Console Output']['Verbosity'])
    if command == 'verify':
      return runVerify(config)
    if command == 'sweep':
      return runSweepCommand(config)
    if command == 'staged':
      return runStaged(config, n, m)
    return runOracleCheck(config, cutoff)
  except ConfigurationError as e:
    logError(e.detail)
    return 2
  except FockTeleportError as e:
    logError(e.detail)
    return 1


def _parser():
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument('--config', help='JSON configuration file', default=None, required=False)
  common.add_argument('--seed', help='random seed (overrides "Random Seed")', type=int, default=None)
  common.add_argument('--out', help='output directory (overrides "File Output/Path")', default=None)
  common.add_argument('--format', help='output format', choices=['csv', 'json'], default=None)
  common.add_argument('--tol', help='identity tolerance (overrides "Tolerances/Identity")', type=float, default=None)

  parser = argparse.ArgumentParser(prog='fockteleport.verify', description='Verify the coherent-state teleportation models.')
  commands = parser.add_subparsers(dest='command', required=True)
  commands.add_parser('verify', parents=[common], help='run every lemma and theorem report')
  commands.add_parser('sweep', parents=[common], help='evaluate the channel families on the (N, d) grid')
  staged = commands.add_parser('staged', parents=[common], help='print per-step norms of the staged procedure')
  staged.add_argument('--n', help='phase index (default N)', type=int, default=None)
  staged.add_argument('--m', help='shift index (default N)', type=int, default=None)
  oracle = commands.add_parser('oracle-check', parents=[common], help='compare against the truncated Fock oracle')
  oracle.add_argument('--cutoff', help='total photon cutoff (default from the tail bound)', type=int, default=None)
  return parser


if __name__ == '__main__':
  args = _parser().parse_args()
  fmt = args.format.upper() if args.format else None
  sys.exit(
      main(args.command, args.config, args.seed, args.out, fmt, args.tol, getattr(args, 'n', None), getattr(args, 'm', None),
           getattr(args, 'cutoff', None)))
