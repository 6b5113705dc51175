#! /usr/bin/env python3
# Fock-space operators acting termwise on coherent combos, and the phase and
# shift unitaries defined on the coherent dictionary {exp(0), exp(a K1 g_j)}.

import numpy as np

from .errors import (ArityMismatchError, DimensionMismatchError, IndexRangeError, InvariantViolationError,
                     NormViolationError, UndefinedActionError)
from .mode_space import asModeOperator, operatorNorm, NORM_TOLERANCE
from .coherent_engine import CoherentCombo, TensorCombo, clusterModes, orthonormalize, comboInner

SPAN_TOLERANCE = 1e-10
MATCH_TOLERANCE = 1e-12
PHASE_TOLERANCE = 1e-12


def _squaredNorms(modes):
  return np.sum(np.abs(modes)**2, axis=1)


def _checkDim(combo, dim, factor=0):
  if combo.factors[factor].shape[1] != dim:
    raise DimensionMismatchError('Operator on C^{0} applied to a factor on C^{1}.'.format(dim, combo.factors[factor].shape[1]))


def _replaceFactor(x, factor, modes, logScale):
  coeffs = x.coeffs * np.exp(logScale)
  if isinstance(x, CoherentCombo):
    return CoherentCombo(coeffs, modes)
  factors = list(x.factors)
  factors[factor] = modes
  return TensorCombo(coeffs, factors)


def _requireTensor(x, arity=None):
  if not isinstance(x, TensorCombo) or (arity is not None and x.arity != arity):
    raise ArityMismatchError('Expected a tensor combo of arity {0}, got arity {1}.'.format(arity or '2 or 3', x.arity))


def beamSplit(pair, x):
  if not isinstance(x, CoherentCombo):
    raise ArityMismatchError('Beam splitting acts on single-factor combos.')
  _checkDim(x, pair.dim)
  first = x.modes @ pair.k1.T
  second = x.modes @ pair.k2.T
  logScale = 0.5 * (_squaredNorms(first) + _squaredNorms(second) - _squaredNorms(x.modes))
  return TensorCombo(x.coeffs * np.exp(logScale), (first, second))


def beamSplitAdjoint(pair, x):
  _requireTensor(x, 2)
  _checkDim(x, pair.dim, 0)
  _checkDim(x, pair.dim, 1)
  h, g = x.factors
  joined = h @ pair.k1.conj() + g @ pair.k2.conj()
  logScale = 0.5 * (_squaredNorms(joined) - _squaredNorms(h) - _squaredNorms(g))
  return CoherentCombo(x.coeffs * np.exp(logScale), joined)


def secondQuantize(t, x, factor=0, checkNorm=True):
  """
  Gamma(T) exp(f) = exp(T f), applied to `factor` of a combo.

  With checkNorm the operator must be a contraction. Without it the map is
  still applied termwise, which is how Gamma is used on spans where T acts
  isometrically.
  """
  t = asModeOperator(t)
  if checkNorm:
    norm = operatorNorm(t)
    if norm > 1.0 + NORM_TOLERANCE:
      raise NormViolationError('Second quantization needs |T| <= 1, got {0:.12f}.'.format(norm))
  _checkDim(x, t.shape[0], factor)
  modes = x.factors[factor]
  image = modes @ t.T
  return _replaceFactor(x, factor, image, 0.5 * (_squaredNorms(image) - _squaredNorms(modes)))


def malliavin(x):
  if not isinstance(x, CoherentCombo):
    raise ArityMismatchError('The compound Malliavin derivative acts on single-factor combos.')
  return TensorCombo(x.coeffs * np.exp(0.5 * _squaredNorms(x.modes)), (x.modes, x.modes))


def skorohod(x):
  _requireTensor(x, 2)
  g, h = x.factors
  if g.shape[1] != h.shape[1]:
    raise DimensionMismatchError('Skorohod integral needs equal factor dimensions.')
  return CoherentCombo(x.coeffs * np.exp(np.sum(g.conj() * h, axis=1).real), g + h)


def exchange(x, adjoint=False, factors=(0, 1)):
  _requireTensor(x)
  i, j = factors
  first, second = x.factors[i], x.factors[j]
  if first.shape[1] != second.shape[1]:
    raise DimensionMismatchError('Exchange needs equal factor dimensions, got {0} and {1}.'.format(first.shape[1], second.shape[1]))
  if adjoint:
    left, right = (first + second) / np.sqrt(2.0), (second - first) / np.sqrt(2.0)
  else:
    left, right = (first - second) / np.sqrt(2.0), (first + second) / np.sqrt(2.0)
  updated = list(x.factors)
  updated[i], updated[j] = left, right
  return TensorCombo(x.coeffs, updated)


def vacuumProject(x, keep='plus', factor=0):
  if keep not in ('plus', 'vacuum'):
    raise InvariantViolationError("Vacuum projection keeps 'plus' or 'vacuum', got '{0}'.".format(keep))
  modes = x.factors[factor]
  vacuumPart = _replaceFactor(x, factor, np.zeros_like(modes), -0.5 * _squaredNorms(modes))
  if keep == 'vacuum':
    return vacuumPart
  return x - vacuumPart


def dftPhases(nDim):
  index = np.arange(1, nDim + 1)
  return np.exp(2j * np.pi * np.outer(index, index) / nDim)


def checkPhaseMatrix(phases, nDim=None, tol=PHASE_TOLERANCE):
  phases = np.asarray(phases, dtype=complex)
  if phases.ndim != 2 or phases.shape[0] != phases.shape[1] or (nDim is not None and phases.shape[0] != nDim):
    raise DimensionMismatchError('Phase matrix must be {0} x {0}, got shape {1}.'.format(nDim or 'N', phases.shape))
  size = phases.shape[0]
  modulus = np.max(np.abs(np.abs(phases) - 1.0))
  if modulus > tol:
    raise InvariantViolationError('Phase matrix entries deviate from unit modulus by {0:.3e}.'.format(modulus))
  orthogonality = np.max(np.abs(phases @ phases.conj().T - size * np.eye(size)))
  if orthogonality > tol * size:
    raise InvariantViolationError('Phase matrix rows are not orthogonal (defect {0:.3e}).'.format(orthogonality))
  return phases


def shiftIndex(j, m, nDim):
  """1-based j (+) m modulo N."""
  return (j - 1 + m) % nDim + 1


class DictionaryOperator:
  """
  Linear operator defined on the span of a finite dictionary of normalized
  coherent vectors. Column k of `images` holds the dictionary coefficients
  of the image of dictionary vector k. Outside the span the operator is the
  identity; inputs with a component there above 1e-10 are rejected.
  """

  def __init__(self, label, dictionary, images, adjointImages, unitary=True):
    self.label = label
    self.dictionary = np.asarray(dictionary, dtype=complex)
    self.images = np.asarray(images, dtype=complex)
    self.adjointImages = np.asarray(adjointImages, dtype=complex)
    self.unitary = unitary
    self._basis = None

  @property
  def dim(self):
    return self.dictionary.shape[1]

  def adjoint(self):
    label = self.label[:-1] if self.label.endswith('*') else self.label + '*'
    return DictionaryOperator(label, self.dictionary, self.adjointImages, self.images, self.unitary)

  def _span(self):
    if self._basis is None:
      self._basis = orthonormalize(self.dictionary)
    return self._basis

  def _applyCoherent(self, x):
    _checkDim(x, self.dim)
    if len(x) == 0:
      return x
    distance = np.max(np.abs(x.modes[:, None, :] - self.dictionary[None, :, :]), axis=2)
    nearest = np.argmin(distance, axis=1)
    if np.all(distance[np.arange(len(x)), nearest] <= MATCH_TOLERANCE):
      weights = np.zeros(self.dictionary.shape[0], dtype=complex)
      np.add.at(weights, nearest, x.coeffs)
      return CoherentCombo(self.images @ weights, self.dictionary)

    basis = self._span()
    coords = basis.coordinates(x)
    residual = basis.residual(x)
    if residual > SPAN_TOLERANCE * max(1.0, x.norm()):
      raise UndefinedActionError("Operator '{0}' is defined on its coherent dictionary only; input leaves the span by {1:.3e}.".format(self.label, residual))
    weights = basis.transform @ coords
    return CoherentCombo(self.images @ weights, self.dictionary) + (x - CoherentCombo(weights, self.dictionary))

  def apply(self, x, factor=0):
    if isinstance(x, CoherentCombo):
      return self._applyCoherent(x)
    return applyToFactor(x, factor, self._applyCoherent)

  def isometryDefect(self, samples):
    """Largest change of <x, y> over pairs of sample combos."""
    images = [self.apply(p) for p in samples]
    defect = 0.0
    for i, x in enumerate(samples):
      for j, y in enumerate(samples):
        defect = max(defect, abs(comboInner(images[i], images[j]) - comboInner(x, y)))
    return defect


def applyToFactor(x, factor, action):
  """Applies a single-factor map to one factor of a tensor combo, mode by mode."""
  _requireTensor(x)
  modes = x.factors[factor]
  leads, labels = clusterModes(modes)
  images = [action(CoherentCombo([1.0], modes[lead])) for lead in leads]

  coeffs = []
  factors = [[] for _ in range(x.arity)]
  for i in range(len(x)):
    image = images[labels[i]]
    coeffs.append(x.coeffs[i] * image.coeffs)
    for f in range(x.arity):
      if f == factor:
        factors[f].append(image.modes)
      else:
        factors[f].append(np.repeat(x.factors[f][i:i + 1], len(image), axis=0))
  if len(coeffs) == 0:
    return x
  return TensorCombo(np.concatenate(coeffs), [np.vstack(f) for f in factors])


def _checkIndex(name, value, nDim):
  if not 1 <= value <= nDim:
    raise IndexRangeError('{0} = {1} is outside 1..{2}.'.format(name, value, nDim))


def _coherentDictionary(model):
  return np.vstack([np.zeros((1, model.modeDim)), model.aliceModes])


def phaseUnitary(n, model):
  """
  B_n on the dictionary {exp(0), exp(a K1 g_j)}: it fixes the vacuum and
  multiplies exp(a K1 g_j) - exp(0) by b_nj.
  """
  _checkIndex('n', n, model.nDim)
  phases = model.phaseMatrix[n - 1]
  vacuumWeights = np.exp(-0.5 * _squaredNorms(model.aliceModes))

  def images(b):
    table = np.zeros((model.nDim + 1, model.nDim + 1), dtype=complex)
    table[0, 0] = 1.0
    table[np.arange(1, model.nDim + 1), np.arange(1, model.nDim + 1)] = b
    table[0, 1:] = (1.0 - b) * vacuumWeights
    return table

  return DictionaryOperator('B_{0}'.format(n), _coherentDictionary(model), images(phases), images(phases.conj()))


def shiftUnitary(m, model):
  _checkIndex('m', m, model.nDim)
  table = np.zeros((model.nDim + 1, model.nDim + 1), dtype=complex)
  table[0, 0] = 1.0
  for j in range(1, model.nDim + 1):
    table[shiftIndex(j, m, model.nDim), j] = 1.0
  return DictionaryOperator('U_{0}'.format(m), _coherentDictionary(model), table, table.T.copy())
