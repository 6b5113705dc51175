#!/usr/bin/env python3
import os
import sys
import numpy as np

sys.path.append(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', 'helpers'))
from helpers import *

from fockteleport.errors import InvalidDimensionError, InvariantViolationError, IndexRangeError
from fockteleport.coherent_engine import comboInner, fidelity, traceDistance, densityFromVectors
from fockteleport.teleport_models import (ModelConfig, InputState, buildInput, buildEntangled, buildMeasurements,
                                          channelPerfect, channelRaw, channelHalf, channelFull, channelOmega, channelFamily,
                                          keyedTarget, stagedProcedure, productTarget, generalPerfect, ChannelResult)

tol = 1e-10
rng = np.random.default_rng(5)


def outcomes(nDim):
  return [(n, m) for n in range(1, nDim + 1) for m in range(1, nDim + 1)]


def testModelValidation():
  checkRaises(InvalidDimensionError, ModelConfig, 1, 1.0)
  checkRaises(InvalidDimensionError, ModelConfig, 2, 0.01)
  config = ModelConfig(2, 1.0)
  checkClose((1.0 / (1.0 + np.exp(-1.0)))**0.5, config.gamma, 1e-14, 'gamma')
  checkClose(1.0 - np.exp(-0.5), config.oneMinusQ, 1e-14, '1 - q')


def testInputStates():
  config = ModelConfig(3, 1.0)
  state = InputState.random(3, rng)
  psis, psi0 = buildInput(config, state)
  gram = np.array([[comboInner(x, y) for y in psis] for x in psis])
  checkClose(np.eye(3), gram, tol, 'Gram of the input vectors')
  for row, psi in zip(state.coeffs, psis):
    checkClose(np.sum(np.conj(row)) / np.sqrt(3.0), comboInner(psi, psi0), tol, '<Psi_s, Psi_0>')
  checkRaises(InvariantViolationError, InputState, [0.5, 0.6], np.eye(2))
  checkRaises(InvariantViolationError, InputState, [0.5, 0.5], np.ones((2, 2)))
  checkRaises(InvalidDimensionError, buildInput, config, InputState.basis(2))


def testResources():
  for nDim in [2, 3]:
    config = ModelConfig(nDim, 1.0)
    checkClose(1.0, buildEntangled(config, 'sigma').vector.norm(), 1e-12, 'sigma norm')
    checkClose(1.0, buildEntangled(config, 'sigma_tilde').vector.norm(), 1e-12, 'sigma~ norm')
  checkRaises(InvariantViolationError, buildEntangled, ModelConfig(2, 1.0), 'xi')


def testMeasurements():
  config = ModelConfig(2, 1.0)
  perfect = buildMeasurements(config, 'F')
  checkClose(np.eye(4), perfect.gram(), tol, 'Gram of F')
  modified = buildMeasurements(config, 'F_tilde')
  gram = modified.gram()
  checkClose(np.ones(4), np.diag(gram).real, tol, 'Norms of F~')
  distant = buildMeasurements(ModelConfig(2, 50.0), 'F_tilde').gram()
  checkClose(np.eye(4), distant, 1e-8, 'Gram of F~ at d = 50')


def testPerfectChannel():
  for kind in ['half', 'orthogonal']:
    for nDim in [2, 3, 4]:
      for density in [0.5, 1.0, 4.0]:
        config = ModelConfig(nDim, density, kind)
        state = InputState.random(nDim, rng)
        family = channelFamily(config, state, 'perfect')
        total = 0.0
        for (n, m), result in family.items():
          checkClose(1.0 / nDim**2, result.probability, 1e-12, 'Perfect probability')
          checkClose(1.0, fidelity(result.output, keyedTarget(config, state, n, m)), tol, 'Perfect fidelity')
          total += result.probability
        checkClose(1.0, total, 1e-12, 'Sum of perfect probabilities')


def halfTotal(config, state):
  total = 0.0
  for n, m in outcomes(config.nDim):
    result = channelHalf(config, state, n, m)
    label = "Half channel trace distance (N = {0}, d = {1}, {2})".format(config.nDim, config.density, config.splitting)
    checkBelow(traceDistance(result.output, keyedTarget(config, state, n, m)), tol, label)
    total += result.probability
  return total


def testHalfChannel():
  state = InputState.random(2, rng)
  total = halfTotal(ModelConfig(2, 2.0), state)
  checkClose((1.0 - np.exp(-1.0))**2 / (1.0 + np.exp(-2.0)), total, tol, 'Sum of half probabilities')
  checkClose(0.35195, total, 1e-5, 'Sum of half probabilities')

  for kind in ['half', 'orthogonal']:
    for nDim in [2, 3]:
      for density in [0.5, 2.0, 4.0]:
        config = ModelConfig(nDim, density, kind)
        q = np.exp(-density / 2.0)
        expected = (1.0 - q)**2 / (1.0 + (nDim - 1) * q**2)
        checkClose(expected, halfTotal(config, InputState.random(nDim, rng)), tol, 'Sum of half probabilities')

  distant = ModelConfig(2, 50.0)
  total = sum(channelHalf(distant, state, n, m).probability for n, m in outcomes(2))
  checkBelow(1.0 - total, 1e-8, 'Missing probability at d = 50')


def testRawChannel():
  config = ModelConfig(2, 1.0)
  state = InputState.basis(2)
  raw = channelRaw(config, state, 1, 1)
  half = channelHalf(config, state, 1, 1)
  assert traceDistance(raw.output, half.output) > 1e-4, "Without post-selection Bob keeps a vacuum component"
  assert raw.probability > half.probability, "Post-selection can only lower the probability"


def testFullChannel():
  q = np.exp(-1.0)
  config = ModelConfig(2, 2.0)
  state = InputState.basis(2)
  result = channelFull(config, state, 2, 2)
  checkClose((1.0 - q)**2 / (4.0 * (1.0 + q**2)), result.probability, tol, 'Full probability for the basis input')

  for nDim in [2, 3]:
    for density in [1.0, 4.0, 16.0]:
      config = ModelConfig(nDim, density)
      state = InputState.random(nDim, rng)
      envelope = np.exp(-density / 2.0) * (14.0 / nDim**2 + 2.0 + 2.0 / np.sqrt(nDim))
      for n, m in outcomes(nDim):
        checkBelow(abs(channelFull(config, state, n, m).probability - 1.0 / nDim**2), envelope, 'Probability deviation')

  config = ModelConfig(2, 50.0)
  state = InputState.random(2, rng)
  result = channelFull(config, state, 1, 2)
  checkBelow(1.0 - fidelity(result.output, keyedTarget(config, state, 1, 2)), 1e-8, 'Infidelity at d = 50')


def testOmegaChannel():
  config = ModelConfig(2, 1.0)
  state = InputState.random(2, rng)
  sigma = buildEntangled(config, 'sigma')
  sigmaTilde = buildEntangled(config, 'sigma_tilde')
  for first, second, channel in [(sigma, sigma, channelPerfect), (sigma, sigmaTilde, channelHalf), (sigmaTilde, sigmaTilde, channelFull)]:
    for n, m in outcomes(2):
      omega = channelOmega(config, state, first, second, n, m)
      named = channel(config, state, n, m)
      checkClose(named.probability, omega.probability, tol, 'Omega probability')
      checkBelow(traceDistance(omega.output, named.output), tol, 'Omega trace distance')


def testStagedProcedure():
  for kind in ['half', 'orthogonal']:
    config = ModelConfig(2, 1.0, kind)
    state = InputState.random(2, rng)
    for n, m in outcomes(2):
      staged = stagedProcedure(config, state, n, m)
      full = channelFull(config, state, n, m)
      checkClose(full.probability, staged.channel.probability, 1e-12, 'Staged probability ({0})'.format(kind))
      checkBelow(traceDistance(staged.channel.output, full.output), tol, 'Staged trace distance ({0})'.format(kind))
      checkClose(np.ones((4, 2)), staged.stepNorms[:4], tol, 'Norms of the unitary steps')


def testStagedLimit():
  config = ModelConfig(2, 50.0)
  state = InputState.random(2, rng)
  staged = stagedProcedure(config, state, 2, 1)
  checkBelow(traceDistance(staged.finalState(), productTarget(config, state, 2, 1)), 1e-6, 'Distance to the product state')
  keyed = stagedProcedure(config, state, 2, 1, applyKey=True)
  psis, _ = buildInput(config, state)
  checkBelow(1.0 - fidelity(keyed.channel.output, densityFromVectors(psis, state.weights)), 1e-6, 'Infidelity after the key')


def testGeneralPerfect():
  nDim = 2
  pure = np.diag([1.0, 0.0])
  result = generalPerfect(nDim, None, pure, nDim, nDim)
  assert isinstance(result, ChannelResult), "The general channel must return a ChannelResult"
  assert result.kind == 'perfect' and (result.n, result.m) == (nDim, nDim), "Outcome labels are not carried"
  checkClose(result.key @ pure @ result.key.conj().T, result.output, 1e-14, 'W rho W*')
  mixed = np.eye(3) / 3.0
  total = 0.0
  for n, m in outcomes(3):
    result = generalPerfect(3, None, mixed, n, m)
    checkClose(mixed, result.output, 1e-14, 'Maximally mixed fixed point')
    total += result.probability
  checkClose(1.0, total, 1e-14, 'Sum of probabilities')
  checkRaises(InvariantViolationError, generalPerfect, 2, None, np.eye(2), 1, 1)
  checkRaises(IndexRangeError, generalPerfect, 2, None, pure, 3, 1)


if __name__ == '__main__':
  runTests(dict(globals()))
