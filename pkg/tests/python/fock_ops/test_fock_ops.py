#!/usr/bin/env python3
import os
import sys
import numpy as np

sys.path.append(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', 'helpers'))
from helpers import *

from fockteleport.errors import (ArityMismatchError, NormViolationError, UndefinedActionError, IndexRangeError,
                                 InvariantViolationError)
from fockteleport.mode_space import makeSplitting
from fockteleport.coherent_engine import CoherentCombo, TensorCombo, comboInner
from fockteleport.fock_ops import (beamSplit, beamSplitAdjoint, secondQuantize, malliavin, skorohod, exchange, vacuumProject,
                                   dftPhases, checkPhaseMatrix, shiftIndex, phaseUnitary, shiftUnitary)
from fockteleport.teleport_models import ModelConfig

tol = 1e-10
samples = 100
rng = np.random.default_rng(23)


def randomContraction(dim):
  x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
  return x / (np.linalg.norm(x, 2) * (1.0 + rng.uniform()))


def testBeamSplitIsometry():
  for kind in ['half', 'orthogonal']:
    pair = makeSplitting(kind, 2)
    for _ in range(samples):
      x, y = randomCombo(rng, pair.dim), randomCombo(rng, pair.dim)
      checkClose(comboInner(x, y), comboInner(beamSplit(pair, x), beamSplit(pair, y)), tol, 'Beam split inner product')
      checkClose(0.0, (beamSplitAdjoint(pair, beamSplit(pair, x)) - x).norm(), tol, 'Adjoint after beam split')


def testBeamSplitAction():
  pair = makeSplitting('half', 2)
  g = np.array([0.4, -0.3j])
  split = beamSplit(pair, CoherentCombo.fromExponentials([1.0], [g]))
  expected = TensorCombo.fromExponentials([1.0], ([g / np.sqrt(2.0)], [g / np.sqrt(2.0)]))
  checkClose(0.0, (split - expected).norm(), tol, 'exp(g) -> exp(K1 g) (x) exp(K2 g)')
  checkRaises(ArityMismatchError, beamSplit, pair, TensorCombo.product(CoherentCombo.vacuum(2), CoherentCombo.vacuum(2)))


def testSecondQuantization():
  dim = 3
  for _ in range(samples):
    x = randomCombo(rng, dim)
    first, second = randomContraction(dim), randomContraction(dim)
    composed = secondQuantize(first, secondQuantize(second, x))
    checkClose(0.0, (composed - secondQuantize(first @ second, x)).norm(), tol, 'Functoriality')
  x = randomCombo(rng, dim)
  checkClose(0.0, (secondQuantize(np.eye(dim), x) - x).norm(), tol, 'Identity')
  checkRaises(NormViolationError, secondQuantize, 2.0 * np.eye(dim), x)


def testSecondQuantizationOfExponential():
  g = np.array([0.2, 0.5j])
  t = np.array([[0.0, 1.0], [1.0, 0.0]])
  image = secondQuantize(t, CoherentCombo.fromExponentials([1.0], [g]))
  checkClose(0.0, (image - CoherentCombo.fromExponentials([1.0], [t @ g])).norm(), tol, 'Gamma(T) exp(g) = exp(Tg)')


def testMalliavinSkorohodDuality():
  for _ in range(samples):
    x = randomCombo(rng, 2)
    u = randomTensor(rng, 2)
    checkClose(comboInner(malliavin(x), u), comboInner(x, skorohod(u)), tol, '<Dx, u> = <x, Su>')


def testExchange():
  for _ in range(samples):
    u, v = randomTensor(rng, 2), randomTensor(rng, 2)
    checkClose(comboInner(u, v), comboInner(exchange(u), exchange(v)), tol, 'Exchange inner product')
    checkClose(0.0, (exchange(exchange(u), adjoint=True) - u).norm(), tol, 'V* V = 1')
    checkClose(0.0, (exchange(exchange(u, adjoint=True)) - u).norm(), tol, 'V V* = 1')


def testExchangeOnFactors():
  u = randomTensor(rng, 2, arity=3)
  moved = exchange(u, factors=(1, 2))
  checkClose(u.norm(), moved.norm(), tol, 'Norm after exchange')
  checkClose(0.0, (exchange(moved, adjoint=True, factors=(1, 2)) - u).norm(), tol, 'Exchange back on factors 2, 3')


def testVacuumProjection():
  for _ in range(samples):
    x = randomCombo(rng, 2)
    plus = vacuumProject(x)
    checkClose(0.0, (vacuumProject(plus) - plus).norm(), tol, 'F+ idempotence')
    checkClose(0.0, (plus + vacuumProject(x, 'vacuum') - x).norm(), tol, 'F+ + F0 = 1')
    checkClose(0.0, comboInner(CoherentCombo.vacuum(2), plus), tol, 'No vacuum component')
  checkRaises(InvariantViolationError, vacuumProject, x, 'minus')


def testPhases():
  for n in [2, 3, 4]:
    phases = dftPhases(n)
    checkPhaseMatrix(phases, n)
    checkClose(np.ones(n), phases[n - 1], 1e-12, 'Trivial last row')
  checkRaises(InvariantViolationError, checkPhaseMatrix, np.ones((2, 2)), 2)
  assert shiftIndex(2, 1, 2) == 1 and shiftIndex(1, 2, 2) == 1 and shiftIndex(1, 1, 3) == 2, "Shift indices wrap modulo N"


def testDictionaryUnitaries():
  config = ModelConfig(3, 1.0)
  modes = np.vstack([np.zeros((1, config.modeDim)), config.aliceModes])
  for n in range(1, 4):
    for m in range(1, 4):
      sampleSet = [CoherentCombo(rng.normal(size=4) + 1j * rng.normal(size=4), modes) for _ in range(4)]
      checkBelow(phaseUnitary(n, config).isometryDefect(sampleSet), tol, 'Phase unitary defect')
      checkBelow(shiftUnitary(m, config).isometryDefect(sampleSet), tol, 'Shift unitary defect')
      x = sampleSet[0]
      back = phaseUnitary(n, config).adjoint().apply(phaseUnitary(n, config).apply(x))
      checkClose(0.0, (back - x).norm(), tol, 'B* B = 1')


def testPhaseUnitaryAction():
  config = ModelConfig(2, 1.0)
  b = config.phaseMatrix[0]
  u = config.differenceVector(2)
  image = phaseUnitary(1, config).apply(u)
  checkClose(0.0, (image - b[1] * u).norm(), tol, 'B_n u_j = b_nj u_j')
  checkClose(0.0, (phaseUnitary(1, config).apply(config.vacuum()) - config.vacuum()).norm(), tol, 'B_n fixes the vacuum')
  shifted = shiftUnitary(1, config).apply(config.differenceVector(1))
  checkClose(0.0, (shifted - config.differenceVector(2)).norm(), tol, 'U_m u_j = u_{j+m}')


def testDictionaryLimits():
  config = ModelConfig(2, 1.0)
  outside = CoherentCombo.coherent(0.37 * np.ones(config.modeDim))
  checkRaises(UndefinedActionError, phaseUnitary(1, config).apply, outside)
  checkRaises(IndexRangeError, phaseUnitary, 0, config)
  checkRaises(IndexRangeError, shiftUnitary, 3, config)


if __name__ == '__main__':
  runTests(dict(globals()))
