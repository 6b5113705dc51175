#! /usr/bin/env python3
# Coherent-state teleportation models: input states, entangled resources,
# Alice's measurement families and the channels Bob ends up with.
#
# Notation used throughout:
#   e_j = |exp(a K1 g_j)>, f_j = |exp(a K2 g_j)>, Omega = |exp(0)>
#   q   = <Omega, e_j>^2 = exp(-d/2)
#   u_j = (e_j - sqrt(q) Omega) / sqrt(1 - q), v_j likewise with f_j

import numpy as np
import scipy.stats

from .errors import InvalidDimensionError, InvariantViolationError, ZeroProbabilityError, ConfigurationError, IndexRangeError
from .logger import logInfo
from .config import parseComplex, parseComplexMatrix
from .mode_space import makeSplitting, scaledMultiplication
from .coherent_engine import (CoherentCombo, TensorCombo, comboInner, partialInner, partialTrace12, densityFromVectors,
                              sumCombos, ZERO_TRACE)
from .fock_ops import (beamSplit, secondQuantize, exchange, vacuumProject, phaseUnitary, shiftUnitary, dftPhases,
                       checkPhaseMatrix, shiftIndex)

MIN_DENSITY = 0.05
INPUT_TOLERANCE = 1e-12
ONS_TOLERANCE = 1e-10


class ModelConfig:

  def __init__(self, nDim, density, splitting='half', phaseMatrix=None, phase=0.0, pair=None, tol=1e-10):
    if nDim < 2:
      raise InvalidDimensionError('The teleportation models need N >= 2, got {0}.'.format(nDim))
    if not np.isfinite(density) or density < MIN_DENSITY:
      raise InvalidDimensionError('Density d = {0} is below the supported minimum {1}.'.format(density, MIN_DENSITY))

    self.nDim = int(nDim)
    self.density = float(density)
    self.pair = pair if pair is not None else makeSplitting(splitting, self.nDim, phase)
    if self.pair.size != self.nDim:
      raise InvalidDimensionError('Splitting basis has {0} vectors, expected N = {1}.'.format(self.pair.size, self.nDim))
    self.splitting = self.pair.kind
    self.phaseMatrix = np.array(checkPhaseMatrix(dftPhases(self.nDim) if phaseMatrix is None else phaseMatrix, self.nDim))
    self.phaseMatrix.setflags(write=False)
    self.tol = tol
    self._cache = {}

  @classmethod
  def fromConfig(cls, config, density, nDim=None):
    model = config['Model']
    nDim = model['Dimension'] if nDim is None else nDim
    phases = model['Phase Matrix']
    if phases is not None:
      phases = parseComplexMatrix(phases, 'Model/Phase Matrix')
    return cls(nDim, density, model['Splitting'].lower(), phases, tol=config['Tolerances']['Identity'])

  @property
  def amplitude(self):
    return np.sqrt(self.density)

  @property
  def q(self):
    return np.exp(-0.5 * self.density)

  @property
  def oneMinusQ(self):
    return -np.expm1(-0.5 * self.density)

  @property
  def gamma(self):
    return 1.0 / np.sqrt(1.0 + (self.nDim - 1) * np.exp(-self.density))

  @property
  def modeDim(self):
    return self.pair.dim

  @property
  def aliceModes(self):
    return self.pair.amplitudeModes(self.amplitude, 1)

  @property
  def bobModes(self):
    return self.pair.amplitudeModes(self.amplitude, 2)

  def cached(self, key, builder):
    if key not in self._cache:
      self._cache[key] = builder()
    return self._cache[key]

  def differenceCombo(self, weights, side=1):
    """sum_j w_j u_j (side 1) or sum_j w_j v_j (side 2)."""
    weights = np.asarray(weights, dtype=complex)
    modes = self.aliceModes if side == 1 else self.bobModes
    scale = 1.0 / np.sqrt(self.oneMinusQ)
    coeffs = np.concatenate([scale * weights, [-np.sqrt(self.q) * scale * np.sum(weights)]])
    return CoherentCombo(coeffs, np.vstack([modes, np.zeros((1, self.modeDim))]))

  def differenceVector(self, j, side=1):
    weights = np.zeros(self.nDim)
    weights[j - 1] = 1.0
    return self.differenceCombo(weights, side)

  def coherentVector(self, j, side=1):
    modes = self.aliceModes if side == 1 else self.bobModes
    return CoherentCombo.coherent(modes[j - 1])

  def vacuum(self):
    return CoherentCombo.vacuum(self.modeDim)

  def applyKey(self, x, n, m, factor=0):
    """Gamma(T) U_m B_n* on one factor."""
    x = phaseUnitary(n, self).adjoint().apply(x, factor)
    x = shiftUnitary(m, self).apply(x, factor)
    return secondQuantize(self.pair.t, x, factor)

  def applyKeyAdjoint(self, x, n, m, factor=0):
    x = secondQuantize(self.pair.t.conj().T, x, factor)
    x = shiftUnitary(m, self).adjoint().apply(x, factor)
    return phaseUnitary(n, self).apply(x, factor)


class InputState:
  """Weights lambda_s and coefficient rows c_s of rho = sum_s lambda_s |Psi_s><Psi_s|."""

  def __init__(self, weights, coeffs, tol=INPUT_TOLERANCE):
    weights = np.asarray(weights, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)
    size = coeffs.shape[0] if coeffs.ndim == 2 else -1
    if coeffs.ndim != 2 or coeffs.shape != (size, size) or weights.shape != (size,):
      raise InvalidDimensionError('Input needs N weights and an N x N coefficient matrix, got {0} and {1}.'.format(weights.shape, coeffs.shape))
    if np.any(weights < 0.0) or abs(np.sum(weights) - 1.0) > tol:
      raise InvariantViolationError('Input weights must be non-negative and sum to 1 (sum = {0:.15f}).'.format(np.sum(weights)))
    defect = np.max(np.abs(coeffs @ coeffs.conj().T - np.eye(size)))
    if defect > tol:
      raise InvariantViolationError('Input coefficient rows are not orthonormal (defect {0:.3e}).'.format(defect))
    self.weights = weights
    self.coeffs = coeffs

  @property
  def nDim(self):
    return self.coeffs.shape[0]

  @classmethod
  def random(cls, nDim, rng):
    coeffs = scipy.stats.unitary_group.rvs(nDim, random_state=rng)
    weights = rng.dirichlet(np.ones(nDim))
    return cls(weights / np.sum(weights), coeffs)

  @classmethod
  def basis(cls, nDim, weights=None):
    weights = np.full(nDim, 1.0 / nDim) if weights is None else weights
    return cls(weights, np.eye(nDim))

  @classmethod
  def fromConfig(cls, config, nDim, rng):
    section = config['Input']
    if section['Type'] == 'Random':
      return cls.random(nDim, rng)
    weights = [parseComplex(w, 'Input/Weights').real for w in section['Weights']]
    coeffs = parseComplexMatrix(section['Coefficients'], 'Input/Coefficients')
    if len(weights) != nDim or coeffs.shape != (nDim, nDim):
      raise ConfigurationError('Explicit input must provide {0} weights and a {0} x {0} coefficient matrix.'.format(nDim))
    return cls(weights, coeffs)

  def matrix(self):
    """rho in the orthonormal basis u_1..u_N."""
    return self.coeffs.T @ np.diag(self.weights) @ self.coeffs.conj()

  def phased(self, phases):
    """Input of B_k* rho B_k for phase row b_k."""
    return InputState(self.weights, self.coeffs * np.asarray(phases).conj()[None, :])


class EntangledResource:

  def __init__(self, vector, kind, normalizer=1.0):
    norm = vector.norm()
    if abs(norm - 1.0) > ONS_TOLERANCE:
      raise InvariantViolationError("Resource '{0}' has norm {1:.15f}.".format(kind, norm))
    self.vector = vector
    self.kind = kind
    self.normalizer = normalizer


class MeasurementFamily:

  def __init__(self, vectors, kind):
    self.vectors = vectors
    self.kind = kind

  def vector(self, n, m):
    return self.vectors[(n, m)]

  def gram(self):
    keys = sorted(self.vectors)
    return np.array([[comboInner(self.vectors[a], self.vectors[b]) for b in keys] for a in keys])


class ChannelResult:
  """
  Bob's normalized output and the outcome probability. `output` is a
  DenseState, except for the general perfect scheme where it is an N x N
  matrix and `key` holds W_nm.
  """

  def __init__(self, output, probability, kind, n, m, bobVectors=None, weights=None, keyApplied=False, key=None):
    self.output = output
    self.probability = probability
    self.kind = kind
    self.n = n
    self.m = m
    self.bobVectors = bobVectors
    self.weights = weights
    self.keyApplied = keyApplied
    self.key = key


def buildInput(config, inputState):
  if inputState.nDim != config.nDim:
    raise InvalidDimensionError('Input has N = {0}, model has N = {1}.'.format(inputState.nDim, config.nDim))
  psis = [config.differenceCombo(row) for row in inputState.coeffs]
  psi0 = config.differenceCombo(np.full(config.nDim, 1.0 / np.sqrt(config.nDim)))
  return psis, psi0


def buildEta(config):
  return config.cached('eta', lambda: CoherentCombo(
      np.full(config.nDim, config.gamma / np.sqrt(config.nDim)), config.amplitude * config.pair.basis))


def buildEtaTilde(config):
  # O_sqrt2 K1 maps a g_k to sqrt(2) a K1 g_k, an isometry on the span of the a g_k
  widen = scaledMultiplication(np.sqrt(2.0), config.modeDim) @ config.pair.k1
  return config.cached('etaTilde', lambda: secondQuantize(widen, buildEta(config), checkNorm=False))


def buildEntangled(config, kind):

  def build():
    if kind == 'sigma':
      terms = [TensorCombo.product(config.differenceVector(k, 1), config.differenceVector(k, 2)) for k in range(1, config.nDim + 1)]
      return EntangledResource(sumCombos(terms) / np.sqrt(config.nDim), 'sigma')
    if kind == 'sigma_tilde':
      return EntangledResource(beamSplit(config.pair, buildEta(config)), 'sigma_tilde', config.gamma)
    raise InvariantViolationError("Resource kind '{0}' not recognized. Use 'sigma' or 'sigma_tilde'.".format(kind))

  return config.cached(('resource', kind), build)


def measurementFromResource(config, resource, n, m):
  """(B_n (x) U_m Gamma(T)*) applied to a resource vector."""
  x = secondQuantize(config.pair.t.conj().T, resource.vector, factor=1)
  x = shiftUnitary(m, config).apply(x, 1)
  return phaseUnitary(n, config).apply(x, 0)


def _perfectVector(config, n, m):
  terms = []
  for j in range(1, config.nDim + 1):
    pair = TensorCombo.product(config.differenceVector(j), config.differenceVector(shiftIndex(j, m, config.nDim)))
    terms.append(config.phaseMatrix[n - 1, j - 1] * pair)
  return sumCombos(terms) / np.sqrt(config.nDim)


def _modifiedVector(config, n, m):
  x = TensorCombo.product(config.vacuum(), buildEtaTilde(config))
  x = exchange(x, adjoint=True)
  x = shiftUnitary(m, config).apply(x, 1)
  return phaseUnitary(n, config).apply(x, 0)


def _indices(config):
  return [(n, m) for n in range(1, config.nDim + 1) for m in range(1, config.nDim + 1)]


def buildMeasurements(config, kind):

  def build():
    if kind == 'F':
      family = MeasurementFamily({key: _perfectVector(config, *key) for key in _indices(config)}, 'F')
      defect = np.max(np.abs(family.gram() - np.eye(config.nDim**2)))
      if defect > ONS_TOLERANCE:
        raise InvariantViolationError('Measurement vectors are not orthonormal (defect {0:.3e}).'.format(defect))
      return family
    if kind == 'F_tilde':
      return MeasurementFamily({key: _modifiedVector(config, *key) for key in _indices(config)}, 'F_tilde')
    raise InvariantViolationError("Measurement kind '{0}' not recognized. Use 'F' or 'F_tilde'.".format(kind))

  return config.cached(('measurements', kind), build)


def teleport(config, inputState, measurement, resource, postSelect, kind='omega', n=None, m=None):
  """
  Bob's conditional state after Alice projects factors 1 and 2 of
  rho (x) resource onto `measurement`, optionally followed by F+ on Bob.
  """
  psis, _ = buildInput(config, inputState)
  bobVectors = []
  for psi in psis:
    bob = partialInner(measurement, TensorCombo.product(psi, resource.vector), (0, 1))
    if postSelect:
      bob = vacuumProject(bob, 'plus')
    bobVectors.append(bob)

  terms = [(w, TensorCombo.product(measurement, bob)) for w, bob in zip(inputState.weights, bobVectors) if w > 0.0 and len(bob) > 0]
  if len(terms) == 0:
    raise ZeroProbabilityError("Channel '{0}' produced no outcome weight.".format(kind))
  state = partialTrace12(terms)
  if state.analyticTrace < ZERO_TRACE:
    raise ZeroProbabilityError("Channel '{0}' outcome ({1}, {2}) has probability {3:.3e}.".format(kind, n, m, state.analyticTrace))
  output = state.normalized()
  logInfo('Detailed', "Channel '{0}' (N = {1}, d = {2}, n = {3}, m = {4}): probability {5:.12e}", kind, config.nDim, config.density, n, m,
          state.analyticTrace)
  return ChannelResult(output, state.analyticTrace, kind, n, m, bobVectors, inputState.weights)


def channelPerfect(config, inputState, n, m):
  measurement = buildMeasurements(config, 'F').vector(n, m)
  return teleport(config, inputState, measurement, buildEntangled(config, 'sigma'), False, 'perfect', n, m)


def channelRaw(config, inputState, n, m):
  measurement = buildMeasurements(config, 'F').vector(n, m)
  return teleport(config, inputState, measurement, buildEntangled(config, 'sigma_tilde'), False, 'raw', n, m)


def channelHalf(config, inputState, n, m):
  measurement = buildMeasurements(config, 'F').vector(n, m)
  return teleport(config, inputState, measurement, buildEntangled(config, 'sigma_tilde'), True, 'half', n, m)


def channelFull(config, inputState, n, m):
  measurement = buildMeasurements(config, 'F_tilde').vector(n, m)
  return teleport(config, inputState, measurement, buildEntangled(config, 'sigma_tilde'), True, 'full', n, m)


def channelOmega(config, inputState, sigma1, sigma2, n, m):
  measurement = measurementFromResource(config, sigma1, n, m)
  return teleport(config, inputState, measurement, sigma2, True, 'omega', n, m)


CHANNELS = {
    'perfect': channelPerfect,
    'raw': channelRaw,
    'half': channelHalf,
    'full': channelFull,
}


def channelFamily(config, inputState, kind):
  return {key: CHANNELS[kind](config, inputState, *key) for key in _indices(config)}


def keyedVectors(config, inputState, n, m):
  psis, _ = buildInput(config, inputState)
  return [config.applyKey(psi, n, m) for psi in psis]


def keyedTarget(config, inputState, n, m):
  """Gamma(T) U_m B_n* rho (Gamma(T) U_m B_n*)* as a DenseState."""
  return densityFromVectors(keyedVectors(config, inputState, n, m), inputState.weights)


class StagedResult:

  def __init__(self, channel, finalVectors, weights, stepNorms):
    self.channel = channel
    self.finalVectors = finalVectors
    self.weights = weights
    self.stepNorms = stepNorms

  def finalState(self):
    return densityFromVectors(self.finalVectors, self.weights)


STAGE_NAMES = [
    'input rho (x) eta~ (x) vacuum',
    'exchange V on factors 2, 3',
    'B_n* (x) U_m* (x) Gamma(T)',
    'exchange V on factors 1, 2',
    'projection vacuum (x) eta~ (x) F+',
    'key (Gamma(T) U_m B_n*)*',
]


def stagedVector(config, psi, n, m, postSelect=True):
  """
  Runs one input vector through the staged procedure up to the projection
  step. Returns the list of intermediate vectors. With n = None the phase
  step is skipped (B = 1).
  """
  etaTilde = buildEtaTilde(config)
  x = TensorCombo.product(psi, etaTilde, config.vacuum())
  history = [x]
  x = exchange(x, factors=(1, 2))
  history.append(x)
  if n is not None:
    x = phaseUnitary(n, config).adjoint().apply(x, 0)
  x = shiftUnitary(m, config).adjoint().apply(x, 1)
  x = secondQuantize(config.pair.t, x, factor=2)
  history.append(x)
  x = exchange(x, factors=(0, 1))
  history.append(x)
  reference = TensorCombo.product(config.vacuum(), etaTilde)
  bob = partialInner(reference, x, (0, 1))
  if postSelect:
    bob = vacuumProject(bob, 'plus')
  history.append(TensorCombo.product(reference, bob) if len(bob) > 0 else None)
  return history, bob


def stagedProcedure(config, inputState, n, m, applyKey=False):
  psis, _ = buildInput(config, inputState)
  finals = []
  bobs = []
  norms = []
  for psi in psis:
    history, bob = stagedVector(config, psi, n, m)
    if applyKey:
      bob = config.applyKeyAdjoint(bob, n, m) if len(bob) > 0 else bob
      history.append(TensorCombo.product(config.vacuum(), buildEtaTilde(config), bob) if len(bob) > 0 else None)
    norms.append([0.0 if x is None else x.norm() for x in history])
    bobs.append(bob)
    finals.append(history[-1])

  probability = float(sum(w * comboInner(b, b).real for w, b in zip(inputState.weights, bobs)))
  if probability < ZERO_TRACE:
    raise ZeroProbabilityError('Staged procedure outcome ({0}, {1}) has probability {2:.3e}.'.format(n, m, probability))
  kept = [(w, f) for w, f in zip(inputState.weights, finals) if w > 0.0 and f is not None]
  output = partialTrace12(kept, normalize=True)
  channel = ChannelResult(output, probability, 'staged', n, m, bobs, inputState.weights, applyKey)
  return StagedResult(channel, [f for _, f in kept], [w for w, _ in kept], np.array(norms).T)


def productTarget(config, inputState, n, m):
  """vacuum (x) eta~ (x) Lambda_nm(rho), the large-density limit of the staged final state."""
  reference = TensorCombo.product(config.vacuum(), buildEtaTilde(config))
  vectors = [TensorCombo.product(reference, y) for y in keyedVectors(config, inputState, n, m)]
  return densityFromVectors(vectors, inputState.weights)


def generalPerfect(nDim, phaseMatrix, rhoMatrix, n, m, tol=1e-10):
  """
  Perfect teleportation on C^N (x) C^N (x) C^N with standard bases: Alice
  measures along xi_nm = N^{-1/2} sum_j b_nj e_j (x) e_{j+m}, the resource
  is N^{-1/2} sum_k e_k (x) e_k, and the key is W_nm e_j = conj(b_nj) e_{j+m}.
  """
  if nDim < 2:
    raise InvalidDimensionError('General perfect scheme needs N >= 2, got {0}.'.format(nDim))
  phases = checkPhaseMatrix(dftPhases(nDim) if phaseMatrix is None else phaseMatrix, nDim)
  rho = np.asarray(rhoMatrix, dtype=complex)
  if rho.shape != (nDim, nDim):
    raise InvalidDimensionError('Density matrix must be {0} x {0}.'.format(nDim))
  if np.max(np.abs(rho - rho.conj().T)) > tol or abs(np.trace(rho) - 1.0) > tol or np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -tol:
    raise InvariantViolationError('Input is not a density matrix.')
  for name, value in (('n', n), ('m', m)):
    if not 1 <= value <= nDim:
      raise IndexRangeError('{0} = {1} is outside 1..{2}.'.format(name, value, nDim))

  measurement = np.zeros((nDim, nDim), dtype=complex)
  key = np.zeros((nDim, nDim), dtype=complex)
  for j in range(1, nDim + 1):
    measurement[j - 1, shiftIndex(j, m, nDim) - 1] = phases[n - 1, j - 1] / np.sqrt(nDim)
    key[shiftIndex(j, m, nDim) - 1, j - 1] = phases[n - 1, j - 1].conj()
  resource = np.eye(nDim) / np.sqrt(nDim)

  bob = np.einsum('ab,aA,bc,AB,BC->cC', measurement.conj(), rho, resource, measurement, resource.conj())
  probability = float(np.trace(bob).real)
  return ChannelResult(bob / probability, probability, 'perfect', n, m, key=key)
