#! /usr/bin/env python3
# Channel-level checks: the perfect and half-perfect identities, the general
# Omega channel, the staged procedure, phase covariance and the operator
# properties the channels are built from.

import numpy as np

from ..coherent_engine import CoherentCombo, TensorCombo, comboInner, densityFromVectors, fidelity, traceDistance
from ..fock_ops import (beamSplit, secondQuantize, exchange, vacuumProject, malliavin, skorohod, phaseUnitary,
                        shiftUnitary, shiftIndex)
from ..teleport_models import (buildInput, buildEta, buildEtaTilde, buildEntangled,
                               buildMeasurements, measurementFromResource, channelPerfect, channelRaw, channelHalf,
                               channelFull, channelOmega, keyedTarget, stagedProcedure, productTarget, generalPerfect)
from .lemmas import halfProbabilitySum, makeReport

PROPERTY_SAMPLES = 100


def _outcomes(config):
  return [(n, m) for n in range(1, config.nDim + 1) for m in range(1, config.nDim + 1)]


def checkPerfectChannel(config, inputState, tol=1e-10):
  probabilities = []
  infidelity = 0.0
  vacuumWeight = 0.0
  for n, m in _outcomes(config):
    result = channelPerfect(config, inputState, n, m)
    probabilities.append(result.probability)
    infidelity = max(infidelity, 1.0 - fidelity(result.output, keyedTarget(config, inputState, n, m)))
    # F+ leaves the output unchanged iff Bob's vectors have no vacuum part
    vacuumWeight = max(vacuumWeight, max(vacuumProject(b, 'vacuum').norm() for b in result.bobVectors))

  probabilities = np.array(probabilities)
  total = np.sum(probabilities)
  absError = max(np.max(np.abs(probabilities - 1.0 / config.nDim**2)), abs(total - 1.0), infidelity, vacuumWeight)
  details = {'probability sum': total, 'infidelity': infidelity, 'vacuum weight': vacuumWeight}
  return makeReport('perfect channel', config, probabilities, np.full(len(probabilities), 1.0 / config.nDim**2), tol,
                    absError=absError, details=details)


def checkHalfChannel(config, inputState, tol=1e-10):
  distance = 0.0
  total = 0.0
  for n, m in _outcomes(config):
    result = channelHalf(config, inputState, n, m)
    total += result.probability
    distance = max(distance, traceDistance(result.output, keyedTarget(config, inputState, n, m)))
  closedForm = halfProbabilitySum(config.nDim, config.density)
  absError = max(distance, abs(total - closedForm))
  return makeReport('half channel', config, [total], [closedForm], tol, absError=absError, details={'trace distance': distance})


def checkRawChannel(config, inputState, tol=1e-10):
  """Post-selecting the raw sigma~ channel with F+ gives the half channel."""
  distance = 0.0
  vacuumWeight = 0.0
  for n, m in _outcomes(config):
    raw = channelRaw(config, inputState, n, m)
    half = channelHalf(config, inputState, n, m)
    selected = [vacuumProject(b, 'plus') for b in raw.bobVectors]
    distance = max(distance, traceDistance(densityFromVectors(selected, inputState.weights), half.output))
    vacuumWeight = max(vacuumWeight, max(vacuumProject(b, 'vacuum').norm() for b in raw.bobVectors))
  return makeReport('raw channel', config, [distance], [0.0], tol, details={'vacuum weight': vacuumWeight})


def checkResourceIdentities(config, tol=1e-10):
  """
  xi~ = (1 (x) Gamma(T)) V* (vacuum (x) eta~), the measurement vectors built
  from the resources agree with the measurement families, and eta~ = eta
  for the half splitting.
  """
  etaTilde = buildEtaTilde(config)
  split = exchange(TensorCombo.product(config.vacuum(), etaTilde), adjoint=True)
  errors = {'resource': (secondQuantize(config.pair.t, split, factor=1) - buildEntangled(config, 'sigma_tilde').vector).norm()}

  perfect = buildMeasurements(config, 'F')
  modified = buildMeasurements(config, 'F_tilde')
  sigma = buildEntangled(config, 'sigma')
  sigmaTilde = buildEntangled(config, 'sigma_tilde')
  errors['F'] = max((measurementFromResource(config, sigma, n, m) - perfect.vector(n, m)).norm() for n, m in _outcomes(config))
  errors['F~'] = max((measurementFromResource(config, sigmaTilde, n, m) - modified.vector(n, m)).norm() for n, m in _outcomes(config))
  if config.splitting == 'half':
    errors['eta'] = (etaTilde - buildEta(config)).norm()

  values = np.array(list(errors.values()))
  return makeReport('resource identities', config, values, np.zeros(len(values)), tol, details={k + ' error': v for k, v in errors.items()})


def checkVacuumIdentities(config, inputState, tol=1e-10):
  """F+ sum_k f_k = (1-q)^{1/2} sqrt(N) Gamma(T) U_m Psi_0 and F+ sum_j c_sj f_{j+m} = (1-q)^{1/2} Gamma(T) U_m Psi_s."""
  psis, psi0 = buildInput(config, inputState)
  scale = np.sqrt(config.oneMinusQ)
  errors = []
  for m in range(1, config.nDim + 1):
    lift = lambda x: secondQuantize(config.pair.t, shiftUnitary(m, config).apply(x))
    total = CoherentCombo(np.ones(config.nDim), config.bobModes)
    errors.append((vacuumProject(total) - scale * np.sqrt(config.nDim) * lift(psi0)).norm())
    for row, psi in zip(inputState.coeffs, psis):
      weights = np.zeros(config.nDim, dtype=complex)
      for j in range(1, config.nDim + 1):
        weights[shiftIndex(j, m, config.nDim) - 1] = row[j - 1]
      errors.append((vacuumProject(CoherentCombo(weights, config.bobModes)) - scale * lift(psi)).norm())
  return makeReport('vacuum identities', config, np.array(errors), np.zeros(len(errors)), tol)


def checkOmegaReduction(config, inputState, tol=1e-10):
  sigma = buildEntangled(config, 'sigma')
  sigmaTilde = buildEntangled(config, 'sigma_tilde')
  cases = {
      'perfect': (sigma, sigma, channelPerfect),
      'half': (sigma, sigmaTilde, channelHalf),
      'full': (sigmaTilde, sigmaTilde, channelFull),
  }
  errors = {}
  for name, (first, second, channel) in cases.items():
    error = 0.0
    for n, m in _outcomes(config):
      omega = channelOmega(config, inputState, first, second, n, m)
      named = channel(config, inputState, n, m)
      error = max(error, traceDistance(omega.output, named.output), abs(omega.probability - named.probability))
    errors[name] = error
  values = np.array(list(errors.values()))
  return makeReport('omega reduction', config, values, np.zeros(len(values)), tol, details={k + ' error': v for k, v in errors.items()})


def checkStagedEquivalence(config, inputState, tol=1e-10):
  error = 0.0
  for n, m in _outcomes(config):
    staged = stagedProcedure(config, inputState, n, m)
    full = channelFull(config, inputState, n, m)
    error = max(error, abs(staged.channel.probability - full.probability), traceDistance(staged.channel.output, full.output))
  return makeReport('staged equivalence', config, [error], [0.0], tol)


def checkStagedLimit(config, inputState, n=None, m=None, tol=1e-6):
  """At large density the final state factorizes and the key returns the input state."""
  n = config.nDim if n is None else n
  m = config.nDim if m is None else m
  staged = stagedProcedure(config, inputState, n, m)
  distance = traceDistance(staged.finalState(), productTarget(config, inputState, n, m))
  keyed = stagedProcedure(config, inputState, n, m, applyKey=True)
  psis, _ = buildInput(config, inputState)
  recovered = fidelity(keyed.channel.output, densityFromVectors(psis, inputState.weights))
  absError = max(distance, 1.0 - recovered)
  return makeReport('staged limit', config, [distance, recovered], [0.0, 1.0], tol, absError=absError,
                    details={'trace distance': distance, 'key fidelity': recovered, 'n': n, 'm': m})


def checkPhaseCovariance(config, inputState, tol=1e-10):
  """With B_{n0} = 1, outcome (k, m) on rho equals outcome (n0, m) on B_k* rho B_k."""
  trivial = [n for n in range(1, config.nDim + 1) if np.allclose(config.phaseMatrix[n - 1], 1.0, atol=tol)]
  if len(trivial) == 0:
    return makeReport('phase covariance', config, [], [], tol, details={'applicable': False})
  base = trivial[0]
  error = 0.0
  for k, m in _outcomes(config):
    direct = channelFull(config, inputState, k, m)
    moved = channelFull(config, inputState.phased(config.phaseMatrix[k - 1]), base, m)
    error = max(error, abs(direct.probability - moved.probability), traceDistance(direct.output, moved.output))
  return makeReport('phase covariance', config, [error], [0.0], tol, details={'applicable': True, 'trivial row': base})


def checkGeneralPerfect(config, inputState, tol=1e-10):
  rho = inputState.matrix()
  probabilities = []
  error = 0.0
  for n, m in _outcomes(config):
    result = generalPerfect(config.nDim, config.phaseMatrix, rho, n, m)
    probabilities.append(result.probability)
    error = max(error, np.max(np.abs(result.output - result.key @ rho @ result.key.conj().T)))
  probabilities = np.array(probabilities)
  absError = max(error, np.max(np.abs(probabilities - 1.0 / config.nDim**2)), abs(np.sum(probabilities) - 1.0))
  return makeReport('general perfect', config, probabilities, np.full(len(probabilities), 1.0 / config.nDim**2), tol,
                    absError=absError)


def _randomModes(rng, count, dim, scale=0.5):
  return scale * (rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))) / np.sqrt(2.0 * dim)


def _randomCombo(rng, dim, terms=3):
  return CoherentCombo(rng.normal(size=terms) + 1j * rng.normal(size=terms), _randomModes(rng, terms, dim))


def _randomTensor(rng, dim, terms=3):
  factors = (_randomModes(rng, terms, dim), _randomModes(rng, terms, dim))
  return TensorCombo(rng.normal(size=terms) + 1j * rng.normal(size=terms), factors)


def _randomContraction(rng, dim):
  x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
  return x / (np.linalg.norm(x, 2) * (1.0 + rng.uniform()))


def _dictionaryCombo(rng, config):
  modes = np.vstack([np.zeros((1, config.modeDim)), config.aliceModes])
  return CoherentCombo(rng.normal(size=len(modes)) + 1j * rng.normal(size=len(modes)), modes)


def checkOperatorProperties(config, rng, samples=PROPERTY_SAMPLES, tol=1e-10):
  """
  Isometry of beam splitting, unitarity of the exchange, functoriality of
  second quantization, duality of the Malliavin derivative and Skorohod
  integral, idempotence of F+ and unitarity of B_n, U_m on their span.
  """
  dim = config.modeDim
  errors = dict.fromkeys(['beam split', 'exchange', 'second quantization', 'duality', 'post-selection', 'phase', 'shift'], 0.0)
  for _ in range(samples):
    x, y = _randomCombo(rng, dim), _randomCombo(rng, dim)
    scale = max(1.0, x.norm() * y.norm())
    errors['beam split'] = max(errors['beam split'], abs(comboInner(beamSplit(config.pair, x), beamSplit(config.pair, y)) - comboInner(x, y)) / scale)

    u, v = _randomTensor(rng, dim), _randomTensor(rng, dim)
    roundTrip = (exchange(exchange(u), adjoint=True) - u).norm() / max(1.0, u.norm())
    preserved = abs(comboInner(exchange(u), exchange(v)) - comboInner(u, v)) / max(1.0, u.norm() * v.norm())
    errors['exchange'] = max(errors['exchange'], roundTrip, preserved)

    first, second = _randomContraction(rng, dim), _randomContraction(rng, dim)
    composed = secondQuantize(first, secondQuantize(second, x))
    errors['second quantization'] = max(errors['second quantization'], (composed - secondQuantize(first @ second, x)).norm() / max(1.0, x.norm()))

    dual = abs(comboInner(malliavin(x), u) - comboInner(x, skorohod(u))) / max(1.0, malliavin(x).norm() * u.norm())
    errors['duality'] = max(errors['duality'], dual)

    once = vacuumProject(x)
    errors['post-selection'] = max(errors['post-selection'], (vacuumProject(once) - once).norm() / max(1.0, x.norm()))

    z, w = _dictionaryCombo(rng, config), _dictionaryCombo(rng, config)
    n, m = rng.integers(1, config.nDim + 1, size=2)
    errors['phase'] = max(errors['phase'], phaseUnitary(int(n), config).isometryDefect([z, w]) / max(1.0, z.norm() * w.norm()))
    errors['shift'] = max(errors['shift'], shiftUnitary(int(m), config).isometryDefect([z, w]) / max(1.0, z.norm() * w.norm()))

  values = np.array(list(errors.values()))
  return makeReport('operator properties', config, values, np.zeros(len(values)), tol,
                    details={k + ' error': v for k, v in errors.items()})
