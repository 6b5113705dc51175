#!/usr/bin/env python3
import os
import sys
import csv
import json
import tempfile
import numpy as np

sys.path.append(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', 'helpers'))
from helpers import *

from fockteleport.errors import ConfigurationError, ResourceLimitError
from fockteleport.config import defaultConfig, applyDefaults, loadConfig, applyOverrides, parseComplex, parseComplexMatrix
from fockteleport.logger import setVerbosity, getVerbosity, isEnough
from fockteleport.coherent_engine import comboInner
from fockteleport.teleport_models import ModelConfig, InputState
from fockteleport.verify.lemmas import (deviationBound, deviationBoundLinear, probabilityBound, halfProbabilitySum, checkTheoremBounds,
                                        checkAsymptoticSlope, fullProbability, checkLemmaBeta, betaClosedForm, theoremDeviation)
import fockteleport.verify.lemmas as lemmas
from fockteleport.verify.theorems import checkOperatorProperties, checkStagedLimit
from fockteleport.verify.sweep import SweepSpec, CSV_HEADER, LEMMA_HEADER, lemmaSuite, runSweep, writeSweep

rng = np.random.default_rng(41)
tol = 1e-10


def testDefaults():
  config = applyDefaults({'Model': {'Dimension': 3}})
  checkClose(3, config['Model']['Dimension'], 0, 'Dimension')
  assert config['Model']['Splitting'] == 'Half', "Defaults were not merged under the document"
  assert defaultConfig() == loadConfig(), "Loading without a file must give the defaults"


def testConfigErrors():
  checkRaises(ConfigurationError, applyDefaults, {'Modle': {}})
  checkRaises(ConfigurationError, applyDefaults, {'Model': {'Dimensions': 2}})
  checkRaises(ConfigurationError, applyDefaults, {'Model': {'Dimension': 'two'}})
  checkRaises(ConfigurationError, applyDefaults, {'Model': {'Splitting': 'Third'}})
  checkRaises(ConfigurationError, applyDefaults, {'Random Seed': True})
  checkRaises(ConfigurationError, loadConfig, '/nonexistent/config.json')
  checkRaises(ConfigurationError, applyOverrides, defaultConfig(), fmt='xml')
  checkRaises(ConfigurationError, applyOverrides, defaultConfig(), tol=-1.0)
  try:
    applyDefaults({'Sweep': {'Contraction Sample': 3}})
  except ConfigurationError as e:
    assert "Sweep/Contraction Sample" in e.detail, "Error does not name the key path: {0}".format(e.detail)


def testOverrides():
  config = applyOverrides(defaultConfig(), seed=11, out='results', fmt='json', tol=1e-8)
  assert config['Random Seed'] == 11 and config['File Output']['Path'] == 'results', "Overrides were not applied"
  assert config['File Output']['Format'] == 'JSON', "Format override is not upper-cased"
  checkClose(1e-8, config['Tolerances']['Identity'], 0.0, 'Tolerance override')
  assert defaultConfig()['Random Seed'] == 7, "Overrides leaked into the defaults"


def testComplexParsing():
  checkClose(1.5, parseComplex(1.5), 0.0, 'Real entry')
  checkClose(0.5 - 2.0j, parseComplex([0.5, -2.0]), 0.0, 'Pair entry')
  checkClose(np.eye(2), parseComplexMatrix([[1, 0], [0, [1.0, 0.0]]]), 0.0, 'Matrix')
  checkRaises(ConfigurationError, parseComplex, 'i')
  checkRaises(ConfigurationError, parseComplexMatrix, [[1, 0], [0]])


def testVerbosity():
  setVerbosity('Minimal')
  assert isEnough('Minimal') and not isEnough('Normal'), "Minimal verbosity filters wrongly"
  setVerbosity('Silent')
  checkRaises(ConfigurationError, setVerbosity, 'Loud')
  assert getVerbosity() == 'Silent', "A rejected verbosity changed the level"


def testBounds():
  q = np.exp(-1.0)
  checkClose(2.0 * q / (1.0 - q)**2 * (4.0 + 2.0 * np.sqrt(2.0) + 2.0), deviationBound(2, 2.0), 1e-12, 'Lemma bound')
  assert deviationBoundLinear(2, 2.0) < deviationBound(2, 2.0), "Theorem form must be the tighter one"
  checkClose(q * (3.5 + 2.0 + np.sqrt(2.0)), probabilityBound(2, 2.0), 1e-12, 'Probability envelope')
  checkClose(0.35195, halfProbabilitySum(2, 2.0), 1e-5, 'Half sum at N = 2, d = 2')
  checkClose((1.0 - q)**2 / (4.0 * (1.0 + q**2)), fullProbability(2, 2.0, InputState.basis(2), ModelConfig(2, 2.0).phaseMatrix, 2), 1e-12,
             'Full probability of the basis input')


def testLemmaSuite():
  for nDim, density, kind in [(2, 0.5, 'half'), (2, 1.0, 'half'), (2, 4.0, 'orthogonal'), (3, 0.5, 'half'), (3, 1.0, 'orthogonal'),
                              (3, 4.0, 'half')]:
    config = ModelConfig(nDim, density, kind)
    state = InputState.random(nDim, rng)
    reports = lemmaSuite(config, state, 5, rng, tol)
    checkClose(16, len(reports), 0, 'Number of lemma reports')
    for report in reports:
      assert report.passed, "Report failed at N = {0}, d = {1}, {2}: {3}".format(nDim, density, kind, report.summary())
      record = report.toRecord()
      assert all(key in record for key in LEMMA_HEADER), "Record misses a column: {0}".format(record)


def testBetaClosedForm():
  config = ModelConfig(2, 1.0)
  state = InputState.random(2, rng)
  report = checkLemmaBeta(config, state, tol)
  assert report.passed, report.summary()
  expected = [comboInner(config.coherentVector(k, 2), betaClosedForm(config, state.coeffs[s], m))
              for m in [1, 2] for s in range(2) for k in [1, 2]]
  checkClose(np.array(expected), report.closedForm, 1e-14, 'Closed form column')

  # A perturbed closed form must be caught
  original = lemmas.betaClosedForm
  lemmas.betaClosedForm = lambda *args: 1.01 * original(*args)
  try:
    assert not lemmas.checkLemmaBeta(config, state, tol).passed, "Beta report passed against a wrong closed form"
  finally:
    lemmas.betaClosedForm = original


def testDeviationDecreasesWithDensity():
  state = InputState.random(2, rng)
  deviations = []
  fidelities = []
  for density in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]:
    deviation = theoremDeviation(ModelConfig(2, density), state, 2, 2, 0, np.random.default_rng(0))
    deviations.append(deviation['measured_eq40'])
    fidelities.append(deviation['fidelity'])
  checkBelow(np.max(np.diff(deviations)), 1e-12, 'Increase of the deviation with d')
  checkBelow(-np.min(np.diff(fidelities)), 1e-12, 'Decrease of the fidelity with d')
  checkBelow(deviations[-1], 1e-5, 'Deviation at d = 32')


def testTheoremChecks():
  for kind in ['half', 'orthogonal']:
    config = ModelConfig(2, 4.0, kind)
    state = InputState.random(2, rng)
    report = checkTheoremBounds(config, state, 5, rng, tol)
    assert report.passed, report.summary()
    report = checkOperatorProperties(config, rng, 10, tol)
    assert report.passed, report.summary()
  state = InputState.random(2, rng)
  assert checkStagedLimit(ModelConfig(2, 50.0), state, 2, 2).passed, "Staged limit failed at d = 50"
  report = checkAsymptoticSlope(ModelConfig(2, 8.0), state)
  assert report.passed, report.summary()


def testSweepLimits():
  checkRaises(ResourceLimitError, SweepSpec, [2, 9], [1.0])
  checkRaises(ConfigurationError, SweepSpec, [2], [0.01])
  checkRaises(ConfigurationError, SweepSpec, [], [1.0])
  checkRaises(ConfigurationError, SweepSpec, [2], [1.0], samples=0)
  spec = SweepSpec([9], [1.0], allowLarge=True)
  assert spec.nValues == [9], "Large dimension was not accepted with the override"


def testSweepDeterminism():
  spec = SweepSpec([2], [1.0, 4.0], seed=3, samples=3)
  first, firstReports = runSweep(spec)
  second, _ = runSweep(spec)
  checkClose(3 * 4 * 2, len(first), 0, 'Number of channel rows')
  assert [r.toRecord() for r in first] == [r.toRecord() for r in second], "Two runs with one seed differ"
  concurrent, _ = runSweep(spec, 'Concurrent', 2)
  assert [r.toRecord() for r in first] == [r.toRecord() for r in concurrent], "Concurrent run differs from sequential"

  for record in first:
    assert record['passed'], "Row failed: {0}".format(record.toRecord())
    if record['channel'] == 'perfect':
      checkClose(0.25, record['probability'], 1e-12, 'Perfect probability')
  assert all(r.passed for r in firstReports), "A lemma report failed"


def testWriters():
  spec = SweepSpec([2], [2.0], samples=2)
  records, reports = runSweep(spec)
  with tempfile.TemporaryDirectory() as path:
    sweepFile, lemmaFile = writeSweep(path, records, reports)
    with open(sweepFile) as f:
      rows = list(csv.reader(f))
    assert rows[0] == CSV_HEADER, "Unexpected header {0}".format(rows[0])
    checkClose(len(records), len(rows) - 1, 0, 'Number of CSV rows')
    assert set(row[-1] for row in rows[1:]) <= {'true', 'false'}, "Verdicts must be written as true/false"
    with open(lemmaFile) as f:
      assert next(csv.reader(f)) == LEMMA_HEADER, "Unexpected lemma header"

    sweepFile, _ = writeSweep(path, records, reports, 'JSON')
    with open(sweepFile) as f:
      document = json.load(f)
    checkClose(records[0]['probability'], document[0]['probability'], 0.0, 'JSON probability')


if __name__ == '__main__':
  setVerbosity('Silent')
  runTests(dict(globals()))
