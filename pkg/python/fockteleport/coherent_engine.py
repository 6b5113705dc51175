#! /usr/bin/env python3
# Finite combinations of coherent vectors and their density matrices.
#
# A combo stores coefficients against NORMALIZED coherent vectors
# |exp f> = e^{-|f|^2/2} exp(f). Inner products of normalized coherent
# vectors never overflow, which keeps Gram matrices usable at large density.

import numpy as np
import scipy.linalg

from .errors import (DimensionMismatchError, ArityMismatchError, InvariantViolationError,
                     DegenerateDictionaryError, ZeroProbabilityError)
from .mode_space import asModeVector

DEDUP_TOLERANCE = 1e-12
ORTHO_TOLERANCE = 1e-12
ZERO_TRACE = 1e-14
EIGEN_CLIP = 1e-14


def expInner(f, g):
  f = asModeVector(f)
  g = asModeVector(g, f.shape[0])
  return complex(np.exp(np.vdot(f, g)))


def coherentOverlap(f, g):
  f = asModeVector(f)
  g = asModeVector(g, f.shape[0])
  return complex(np.exp(np.vdot(f, g) - 0.5 * (np.vdot(f, f).real + np.vdot(g, g).real)))


def logOverlap(left, right):
  """
  Exponents of <|exp f_p>, |exp g_q>> for rows f_p of `left` and g_q of
  `right`. The real part equals -|f_p - g_q|^2 / 2 and is never positive.
  """
  if left.shape[1] != right.shape[1]:
    raise DimensionMismatchError('Mode dimensions {0} and {1} differ.'.format(left.shape[1], right.shape[1]))
  leftSq = np.sum(np.abs(left)**2, axis=1)
  rightSq = np.sum(np.abs(right)**2, axis=1)
  return left.conj() @ right.T - 0.5 * (leftSq[:, None] + rightSq[None, :])


def overlapMatrix(left, right):
  return np.exp(logOverlap(left, right))


def factorOverlap(leftFactors, rightFactors):
  exponent = np.zeros((leftFactors[0].shape[0], rightFactors[0].shape[0]), dtype=complex)
  for l, r in zip(leftFactors, rightFactors):
    exponent += logOverlap(l, r)
  return np.exp(exponent)


def clusterModes(stacked, tol=DEDUP_TOLERANCE):
  """
  Groups rows of `stacked` that agree entrywise within `tol`.

  Returns (leads, labels): `leads` holds the index of the first row of each
  cluster in order of appearance, `labels[i]` the cluster of row i.
  """
  count = stacked.shape[0]
  if count == 0:
    return np.zeros(0, dtype=int), np.zeros(0, dtype=int)

  # Rows within tol entrywise project within tol (weights sum to 1); the
  # window is widened to absorb rounding in the projection
  flat = np.hstack([stacked.real, stacked.imag])
  weights = np.linspace(1.0, 2.0, flat.shape[1])
  projection = flat @ (weights / np.sum(weights))
  order = np.argsort(projection, kind='stable')
  sortedProjection = projection[order]

  labels = np.full(count, -1, dtype=int)
  leads = []
  for lead in range(count):
    if labels[lead] >= 0:
      continue
    lo = np.searchsorted(sortedProjection, projection[lead] - 2.0 * tol, side='left')
    hi = np.searchsorted(sortedProjection, projection[lead] + 2.0 * tol, side='right')
    window = order[lo:hi]
    window = window[labels[window] < 0]
    close = np.max(np.abs(stacked[window] - stacked[lead]), axis=1) <= tol
    labels[window[close]] = len(leads)
    leads.append(lead)
  return np.array(leads, dtype=int), labels


class _Combo:

  def __init__(self, coeffs, factors, dedup=True):
    coeffs = np.array(coeffs, dtype=complex).reshape(-1)
    parsed = []
    for f in factors:
      f = np.array(f, dtype=complex)
      if f.ndim != 2 or f.shape[0] != coeffs.shape[0] or f.shape[1] < 1:
        raise DimensionMismatchError('Factor modes of shape {0} do not match {1} coefficients.'.format(f.shape, coeffs.shape[0]))
      if not np.all(np.isfinite(f)):
        raise InvariantViolationError('Combo has non-finite mode entries.')
      parsed.append(f)
    if not np.all(np.isfinite(coeffs)):
      raise InvariantViolationError('Combo has non-finite coefficients.')

    if dedup and coeffs.shape[0] > 1:
      leads, labels = clusterModes(np.hstack(parsed))
      merged = np.zeros(leads.shape[0], dtype=complex)
      np.add.at(merged, labels, coeffs)
      coeffs = merged
      parsed = [f[leads] for f in parsed]

    self.coeffs = coeffs
    self.factors = tuple(parsed)
    self.coeffs.setflags(write=False)
    for f in self.factors:
      f.setflags(write=False)

  @property
  def arity(self):
    return len(self.factors)

  @property
  def dims(self):
    return tuple(f.shape[1] for f in self.factors)

  def __len__(self):
    return self.coeffs.shape[0]

  @property
  def terms(self):
    return [(c, tuple(f[i] for f in self.factors)) for i, c in enumerate(self.coeffs)]

  def _like(self, coeffs, factors):
    return type(self)._fromParts(coeffs, factors)

  def _checkCompatible(self, other):
    if type(self) is not type(other) or self.arity != other.arity:
      raise ArityMismatchError('Cannot combine a combo of arity {0} with one of arity {1}.'.format(self.arity, getattr(other, 'arity', None)))
    if self.dims != other.dims:
      raise DimensionMismatchError('Factor dimensions {0} and {1} differ.'.format(self.dims, other.dims))

  def __add__(self, other):
    self._checkCompatible(other)
    coeffs = np.concatenate([self.coeffs, other.coeffs])
    factors = [np.vstack([a, b]) for a, b in zip(self.factors, other.factors)]
    return self._like(coeffs, factors)

  def __neg__(self):
    return self._like(-self.coeffs, self.factors)

  def __sub__(self, other):
    return self + (-other)

  def __mul__(self, scalar):
    return self._like(complex(scalar) * self.coeffs, self.factors)

  __rmul__ = __mul__

  def __truediv__(self, scalar):
    return self * (1.0 / complex(scalar))

  def norm(self):
    return float(np.sqrt(max(comboInner(self, self).real, 0.0)))

  def normalized(self):
    value = self.norm()
    if value < ZERO_TRACE:
      raise InvariantViolationError('Cannot normalize a vector of norm {0:.3e}.'.format(value))
    return self / value


class CoherentCombo(_Combo):
  """Linear combination sum_i c_i |exp f_i> of normalized coherent vectors."""

  def __init__(self, coeffs, modes, dedup=True):
    modes = np.asarray(modes, dtype=complex)
    if modes.ndim == 1:
      modes = modes.reshape(1, -1)
    super().__init__(coeffs, (modes,), dedup)

  @classmethod
  def _fromParts(cls, coeffs, factors):
    return cls(coeffs, factors[0])

  @classmethod
  def vacuum(cls, dim):
    return cls([1.0], np.zeros((1, dim)))

  @classmethod
  def zero(cls, dim):
    return cls(np.zeros(0), np.zeros((0, dim)))

  @classmethod
  def coherent(cls, mode, coeff=1.0):
    mode = asModeVector(mode)
    return cls([coeff], mode.reshape(1, -1))

  @classmethod
  def fromExponentials(cls, coeffs, modes):
    """Builds sum_i c_i exp(f_i) from unnormalized exponential-vector coefficients."""
    modes = np.asarray(modes, dtype=complex).reshape(len(coeffs), -1)
    scale = np.exp(0.5 * np.sum(np.abs(modes)**2, axis=1))
    return cls(np.asarray(coeffs, dtype=complex) * scale, modes)

  @property
  def modes(self):
    return self.factors[0]

  @property
  def dim(self):
    return self.factors[0].shape[1]


class TensorCombo(_Combo):
  """Linear combination of products |exp f_1> (x) ... (x) |exp f_k>, k = 2 or 3."""

  def __init__(self, coeffs, factors, dedup=True):
    if len(factors) not in (2, 3):
      raise ArityMismatchError('Tensor combos have arity 2 or 3, got {0}.'.format(len(factors)))
    super().__init__(coeffs, factors, dedup)

  @classmethod
  def _fromParts(cls, coeffs, factors):
    return cls(coeffs, factors)

  @classmethod
  def fromExponentials(cls, coeffs, factors):
    factors = [np.asarray(f, dtype=complex).reshape(len(coeffs), -1) for f in factors]
    exponent = sum(0.5 * np.sum(np.abs(f)**2, axis=1) for f in factors)
    return cls(np.asarray(coeffs, dtype=complex) * np.exp(exponent), factors)

  @classmethod
  def product(cls, *parts):
    coeffs = np.ones(1, dtype=complex)
    factors = []
    for part in parts:
      count = len(coeffs)
      size = len(part)
      coeffs = np.outer(coeffs, part.coeffs).reshape(-1)
      factors = [np.repeat(f, size, axis=0) for f in factors]
      factors += [np.tile(g, (count, 1)) for g in part.factors]
    return cls(coeffs, factors)

  def factorModes(self, index):
    return self.factors[index]


def _comboFromFactors(coeffs, factors):
  if len(factors) == 1:
    return CoherentCombo(coeffs, factors[0])
  return TensorCombo(coeffs, factors)


def comboInner(x, y):
  if type(x) is not type(y) or x.arity != y.arity:
    raise ArityMismatchError('Inner product needs combos of equal arity, got {0} and {1}.'.format(x.arity, y.arity))
  if x.dims != y.dims:
    raise DimensionMismatchError('Factor dimensions {0} and {1} differ.'.format(x.dims, y.dims))
  if len(x) == 0 or len(y) == 0:
    return 0j
  return complex(x.coeffs.conj() @ factorOverlap(x.factors, y.factors) @ y.coeffs)


def partialInner(bra, ket, factors):
  """
  Contracts `bra` against the listed factors of the tensor combo `ket` and
  returns the combo living on the remaining factors, in order.
  """
  factors = tuple(factors)
  if bra.arity != len(factors) or not isinstance(ket, TensorCombo):
    raise ArityMismatchError('Partial inner product needs a bra of arity {0} and a tensor ket.'.format(len(factors)))
  rest = [i for i in range(ket.arity) if i not in factors]
  if len(rest) == 0:
    raise ArityMismatchError('Partial inner product must leave at least one factor.')
  weights = factorOverlap(bra.factors, [ket.factors[i] for i in factors])
  coeffs = (bra.coeffs.conj() @ weights) * ket.coeffs
  return _comboFromFactors(coeffs, [ket.factors[i] for i in rest])


def unionDictionary(combos, tol=DEDUP_TOLERANCE):
  """Distinct factor-mode tuples appearing in `combos`, as a tuple of arrays."""
  combos = list(combos)
  arity = combos[0].arity
  stacked = [np.vstack([c.factors[i] for c in combos]) for i in range(arity)]
  leads, _ = clusterModes(np.hstack(stacked), tol)
  return tuple(s[leads] for s in stacked)


class OrthoBasis:
  """
  Orthonormal basis for the span of a dictionary of (tensor products of)
  normalized coherent vectors. Column r of `transform` gives the dictionary
  coefficients of the r-th orthonormal vector.
  """

  def __init__(self, dictionary, gram, transform, tol):
    self.dictionary = dictionary
    self.gram = gram
    self.transform = transform
    self.tol = tol

  @property
  def rank(self):
    return self.transform.shape[1]

  @property
  def arity(self):
    return len(self.dictionary)

  def _dictionaryOverlap(self, factors):
    return factorOverlap(self.dictionary, factors)

  def coordinates(self, combo):
    if combo.arity != self.arity:
      raise ArityMismatchError('Basis of arity {0} cannot embed a combo of arity {1}.'.format(self.arity, combo.arity))
    if len(combo) == 0:
      return np.zeros(self.rank, dtype=complex)
    return self.transform.conj().T @ (self._dictionaryOverlap(combo.factors) @ combo.coeffs)

  def residual(self, combo):
    coords = self.coordinates(combo)
    return float(np.sqrt(max(comboInner(combo, combo).real - np.vdot(coords, coords).real, 0.0)))

  def toCombo(self, coords):
    return _comboFromFactors(self.transform @ np.asarray(coords, dtype=complex), self.dictionary)

  def embedding(self, other):
    """Matrix taking coordinates in `other` to coordinates in this basis."""
    overlap = self._dictionaryOverlap(other.dictionary)
    return self.transform.conj().T @ overlap @ other.transform


def _asDictionary(dictionary):
  if isinstance(dictionary, (CoherentCombo, TensorCombo)):
    return dictionary.factors
  if isinstance(dictionary, np.ndarray):
    return (np.atleast_2d(np.asarray(dictionary, dtype=complex)),)
  return tuple(np.atleast_2d(np.asarray(f, dtype=complex)) for f in dictionary)


def orthonormalize(dictionary, tol=ORTHO_TOLERANCE):
  dictionary = _asDictionary(dictionary)
  if dictionary[0].shape[0] == 0:
    raise DegenerateDictionaryError('Cannot orthonormalize an empty dictionary.')

  gram = factorOverlap(dictionary, dictionary)
  gram = 0.5 * (gram + gram.conj().T)
  values, vectors = scipy.linalg.eigh(gram)
  cutoff = tol * max(values[-1], 0.0)
  keep = values > cutoff
  if not np.any(keep):
    raise DegenerateDictionaryError('All Gram eigenvalues fall below the cutoff {0:.3e}.'.format(cutoff))

  # Largest eigenvalues first, and each eigenvector's dominant entry made positive
  values = values[keep][::-1]
  vectors = vectors[:, keep][:, ::-1]
  pivots = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])]
  vectors = vectors * (np.abs(pivots) / pivots)[None, :]
  return OrthoBasis(dictionary, gram, vectors / np.sqrt(values)[None, :], tol)


def psdSqrt(matrix):
  values, vectors = scipy.linalg.eigh(0.5 * (matrix + matrix.conj().T))
  values = np.where(values > EIGEN_CLIP * max(values[-1], 0.0), values, 0.0)
  return (vectors * np.sqrt(values)[None, :]) @ vectors.conj().T


class DenseState:
  """Density matrix written in the orthonormal coordinates of an OrthoBasis."""

  def __init__(self, matrix, basis, analyticTrace=None):
    self.matrix = np.asarray(matrix, dtype=complex)
    self.basis = basis
    self.analyticTrace = analyticTrace

  def trace(self):
    return float(np.trace(self.matrix).real)

  def normalized(self):
    value = self.trace()
    if value < ZERO_TRACE:
      raise ZeroProbabilityError('State trace {0:.3e} is too small to normalize.'.format(value))
    return DenseState(self.matrix / value, self.basis, self.analyticTrace)

  def eigenvalues(self):
    return scipy.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

  def expectation(self, operator):
    return complex(np.trace(self.matrix @ operator))

  def inBasis(self, basis):
    if basis is self.basis:
      return self
    embed = basis.embedding(self.basis)
    return DenseState(embed @ self.matrix @ embed.conj().T, basis, self.analyticTrace)


def densityFromVectors(vectors, weights=None, normalize=True, basis=None):
  vectors = list(vectors)
  if weights is None:
    weights = np.ones(len(vectors))
  if basis is None:
    basis = orthonormalize(unionDictionary(vectors))
  matrix = np.zeros((basis.rank, basis.rank), dtype=complex)
  for w, v in zip(weights, vectors):
    coords = basis.coordinates(v)
    matrix += w * np.outer(coords, coords.conj())
  state = DenseState(matrix, basis, float(sum(w * comboInner(v, v).real for w, v in zip(weights, vectors))))
  return state.normalized() if normalize else state


def alignStates(*states):
  if all(s.basis is states[0].basis for s in states):
    return states
  dictionary = [np.vstack(f) for f in zip(*[s.basis.dictionary for s in states])]
  leads, _ = clusterModes(np.hstack(dictionary))
  basis = orthonormalize(tuple(f[leads] for f in dictionary))
  return tuple(s.inBasis(basis) for s in states)


def fidelity(first, second):
  first, second = alignStates(first, second)
  product = psdSqrt(first.matrix) @ psdSqrt(second.matrix)
  value = np.sum(scipy.linalg.svdvals(product))**2
  return float(min(max(value, 0.0), 1.0))


def traceDistance(first, second):
  first, second = alignStates(first, second)
  difference = first.matrix - second.matrix
  return float(0.5 * np.sum(np.abs(scipy.linalg.eigvalsh(0.5 * (difference + difference.conj().T)))))


def partialTrace12(terms, normalize=False):
  """
  Traces out the first two factors of sum_k w_k |u_k><v_k| for arity-3
  tensor combos, using

    tr_12 |a b w><a' b' w'| = <a', a> <b', b> |w><w'|

  `terms` holds (w, u, v) or (w, u) triples, the latter meaning v = u.
  """
  terms = [(t[0], t[1], t[1] if len(t) == 2 else t[2]) for t in terms]
  for _, u, v in terms:
    if u.arity != 3 or v.arity != 3:
      raise ArityMismatchError('Partial trace over factors 1 and 2 needs arity-3 combos.')

  bobModes = np.vstack([m for _, u, v in terms for m in (u.factors[2], v.factors[2])])
  leads, labels = clusterModes(bobModes)
  dictionary = bobModes[leads]

  kernel = np.zeros((leads.shape[0], leads.shape[0]), dtype=complex)
  analyticTrace = 0j
  offset = 0
  for weight, u, v in terms:
    ketLabels = labels[offset:offset + len(u)]
    offset += len(u)
    braLabels = labels[offset:offset + len(v)]
    offset += len(v)
    if len(u) == 0 or len(v) == 0:
      continue
    traced = factorOverlap(v.factors[:2], u.factors[:2])
    block = weight * np.outer(u.coeffs, v.coeffs.conj()) * traced.T
    np.add.at(kernel, (ketLabels[:, None], braLabels[None, :]), block)
    analyticTrace += np.sum(block * overlapMatrix(v.factors[2], u.factors[2]).T)

  if leads.shape[0] == 0:
    raise ZeroProbabilityError('Partial trace of an empty state.')
  basis = orthonormalize(dictionary)
  embed = basis.transform.conj().T @ basis.gram
  state = DenseState(embed @ kernel @ embed.conj().T, basis, float(analyticTrace.real))
  if normalize:
    if state.analyticTrace < ZERO_TRACE:
      raise ZeroProbabilityError('Partial trace {0:.3e} is below {1:.0e}.'.format(state.analyticTrace, ZERO_TRACE))
    return DenseState(state.matrix / state.analyticTrace, basis, state.analyticTrace)
  return state


def sumCombos(combos):
  """Adds a non-empty list of combos of one kind, merging duplicates once."""
  combos = list(combos)
  first = combos[0]
  for c in combos[1:]:
    first._checkCompatible(c)
  coeffs = np.concatenate([c.coeffs for c in combos])
  factors = [np.vstack([c.factors[i] for c in combos]) for i in range(first.arity)]
  return first._like(coeffs, factors)
