#! /usr/bin/env python3
# Brute-force Fock space over C^M in the occupation-number basis, truncated
# at a total photon number. Used to cross-check the coherent engine on small
# instances; nothing in the verification tool routes results through it.

from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse
import scipy.special

from .errors import CutoffError, ResourceLimitError, NormViolationError, DimensionMismatchError
from .logger import logInfo
from .mode_space import asModeVector, asModeOperator, operatorNorm, NORM_TOLERANCE
from .fock_ops import shiftIndex
from .teleport_models import channelPerfect, channelHalf

MAX_ORACLE_DIM = 20000
MAX_ORACLE_MODES = 4
MAX_ORACLE_CUTOFF = 20
MAX_ORACLE_DENSITY = 1.0
TAIL_TARGET = 1e-13


def exponentialTail(x, cutoff):
  """sum_{k > cutoff} x^k / k!, summed directly to avoid cancellation."""
  if x <= 0.0:
    return 0.0
  k = cutoff + 1
  term = np.exp(k * np.log(x) - scipy.special.gammaln(k + 1))
  total = 0.0
  while term > 1e-300 and term > 1e-17 * total:
    total += term
    k += 1
    term *= x / k
  return float(total)


class TruncatedFock:
  """Occupation tuples (n_1..n_M) with n_1 + ... + n_M <= cutoff, ordered by total."""

  def __init__(self, modes, cutoff):
    if modes < 1 or cutoff < 0:
      raise ResourceLimitError('Truncated Fock space needs M >= 1 and cutoff >= 0.')
    dim = int(scipy.special.comb(modes + cutoff, modes, exact=True))
    if dim > MAX_ORACLE_DIM:
      raise ResourceLimitError('Truncated Fock space of dimension {0} exceeds the limit {1}.'.format(dim, MAX_ORACLE_DIM))

    sectors = [np.zeros((1, modes), dtype=int)]
    for total in range(1, cutoff + 1):
      combos = np.array(list(combinations_with_replacement(range(modes), total)))
      sectors.append(np.array([np.bincount(c, minlength=modes) for c in combos]))
    self.modes = modes
    self.cutoff = cutoff
    self.states = np.vstack(sectors)
    self.totals = np.sum(self.states, axis=1)
    self.index = {tuple(s): i for i, s in enumerate(self.states)}
    self._creators = None
    assert self.states.shape[0] == dim

  @property
  def dim(self):
    return self.states.shape[0]

  def creation(self, k):
    """Truncated a_k^dagger; states at the cutoff map to zero."""
    if self._creators is None:
      self._creators = [self._buildCreation(mode) for mode in range(self.modes)]
    return self._creators[k]

  def _buildCreation(self, k):
    rows, cols, values = [], [], []
    for i, state in enumerate(self.states):
      if self.totals[i] == self.cutoff:
        continue
      raised = state.copy()
      raised[k] += 1
      rows.append(self.index[tuple(raised)])
      cols.append(i)
      values.append(np.sqrt(raised[k]))
    return scipy.sparse.csr_matrix((values, (rows, cols)), shape=(self.dim, self.dim), dtype=complex)

  def vacuumProjector(self, keep='plus'):
    diagonal = np.ones(self.dim) if keep == 'plus' else np.zeros(self.dim)
    diagonal[0] = 0.0 if keep == 'plus' else 1.0
    return scipy.sparse.diags(diagonal).tocsr()


class OracleVector:

  def __init__(self, space, amplitudes, tail=0.0):
    self.space = space
    self.amplitudes = np.asarray(amplitudes, dtype=complex)
    self.tail = tail

  def inner(self, other):
    return complex(np.vdot(self.amplitudes, other.amplitudes))

  def norm(self):
    return float(np.linalg.norm(self.amplitudes))


def oracleExp(space, g):
  g = asModeVector(g, space.modes)
  normSq = float(np.vdot(g, g).real)
  if normSq > space.cutoff / 4.0:
    raise CutoffError('|g|^2 = {0:.3f} is too large for cutoff {1} (limit cutoff/4).'.format(normSq, space.cutoff))

  powers = np.ones((space.modes, space.cutoff + 1), dtype=complex)
  for k in range(1, space.cutoff + 1):
    powers[:, k] = powers[:, k - 1] * g
  modes = np.arange(space.modes)
  amplitudes = np.prod(powers[modes[None, :], space.states], axis=1)
  amplitudes = amplitudes / np.sqrt(np.prod(scipy.special.factorial(space.states), axis=1))
  return OracleVector(space, amplitudes, exponentialTail(normSq, space.cutoff))


def oracleInnerTail(f, g, cutoff):
  """Bound on |<exp f, exp g> - truncated inner product|."""
  return exponentialTail(float(np.linalg.norm(f) * np.linalg.norm(g)), cutoff)


def secondQuantizationMatrix(space, t):
  """
  Gamma(T) restricted to the truncated space, built sector by sector from

    Gamma(T)|n> = n_k^{-1/2} sum_l T_lk a_l^dagger Gamma(T)|n - e_k>

  with k the first occupied mode of n. Sectors are invariant, so the
  truncation is exact.
  """
  t = asModeOperator(t, space.modes)
  columns = np.zeros((space.dim, space.dim), dtype=complex)
  columns[0, 0] = 1.0
  for i in range(1, space.dim):
    state = space.states[i]
    k = int(np.flatnonzero(state)[0])
    lowered = state.copy()
    lowered[k] -= 1
    previous = columns[:, space.index[tuple(lowered)]]
    column = np.zeros(space.dim, dtype=complex)
    for l in range(space.modes):
      if t[l, k] != 0.0:
        column += t[l, k] * (space.creation(l) @ previous)
    columns[:, i] = column / np.sqrt(state[k])
  return columns


def oracleSecondQuantize(space, t, v):
  t = asModeOperator(t, space.modes)
  if operatorNorm(t) > 1.0 + NORM_TOLERANCE:
    raise NormViolationError('Second quantization needs |T| <= 1, got {0:.12f}.'.format(operatorNorm(t)))
  if v.space is not space:
    raise DimensionMismatchError('Oracle vector belongs to a different truncated space.')
  return OracleVector(space, secondQuantizationMatrix(space, t) @ v.amplitudes, v.tail)


def oracleCombo(space, combo):
  """Embeds a coherent combo (normalized-coherent coefficients) into the oracle space."""
  amplitudes = np.zeros(space.dim, dtype=complex)
  tail = 0.0
  for coeff, (mode,) in combo.terms:
    vector = oracleExp(space, mode)
    scale = np.exp(-0.5 * np.vdot(mode, mode).real)
    amplitudes += coeff * scale * vector.amplitudes
    tail += abs(coeff) * scale * np.sqrt(vector.tail)
  return OracleVector(space, amplitudes, tail**2)


def oraclePartialTrace12(weights, tensors):
  """
  Dense tr_12 of sum_k w_k |psi_k><psi_k| for three-factor vectors given as
  sums of products,

    psi = sum_i c_i a_i (x) b_i (x) e_i,
    tr_12 |psi><psi| = sum_ij c_i conj(c_j) <a_j, a_i> <b_j, b_i> |e_i><e_j|,

  with each tensor a tuple (c, a, b, e) holding one row per term.
  """
  result = None
  for w, (c, a, b, e) in zip(weights, tensors):
    overlap = (a.conj() @ a.T) * (b.conj() @ b.T)
    mixing = np.outer(c, c.conj()) * overlap.T
    block = w * (e.T @ mixing @ e.conj())
    result = block if result is None else result + block
  return result


def defaultCutoff(config):
  normSq = 0.5 * config.density
  for cutoff in range(4, MAX_ORACLE_CUTOFF + 1):
    if exponentialTail(normSq, cutoff) * np.exp(-normSq) <= TAIL_TARGET:
      return cutoff
  return MAX_ORACLE_CUTOFF


class OracleReport:

  def __init__(self, nDim, density, n, m, cutoff, dim, tail, tolerance, values):
    self.nDim = nDim
    self.density = density
    self.n = n
    self.m = m
    self.cutoff = cutoff
    self.dim = dim
    self.tail = tail
    self.tolerance = tolerance
    self.values = values

  @property
  def deviation(self):
    return max(abs(v['engine'] - v['oracle']) if 'engine' in v else v['deviation'] for v in self.values.values())

  @property
  def passed(self):
    return self.deviation <= self.tolerance

  def toRecord(self):
    record = {'N': self.nDim, 'd': self.density, 'n': self.n, 'm': self.m, 'cutoff': self.cutoff, 'dim': self.dim,
              'tail': self.tail, 'tolerance': self.tolerance, 'deviation': self.deviation, 'passed': self.passed}
    for name, value in self.values.items():
      for field, number in value.items():
        record[name + ' ' + field] = number
    return record


def _differenceVectors(space, config, side):
  modes = config.aliceModes if side == 1 else config.bobModes
  vacuum = np.zeros(space.dim, dtype=complex)
  vacuum[0] = 1.0
  coherent = []
  for mode in modes:
    coherent.append(np.exp(-0.5 * np.vdot(mode, mode).real) * oracleExp(space, mode).amplitudes)
  difference = [(e - np.sqrt(config.q) * vacuum) / np.sqrt(config.oneMinusQ) for e in coherent]
  return np.array(coherent), np.array(difference)


def _measurementTerms(config, n, m, alice):
  """xi_nm = N^{-1/2} sum_j b_nj u_j (x) u_{j+m} as (coeffs, first, second)."""
  partners = [shiftIndex(j, m, config.nDim) - 1 for j in range(1, config.nDim + 1)]
  return config.phaseMatrix[n - 1] / np.sqrt(config.nDim), alice, alice[partners]


def _projectedState(psi, measurement, resource, bobProjector=None):
  """
  (|xi><xi| (x) 1)(psi (x) resource) as product terms, one per pair of a
  measurement term i and a resource term k. `bobProjector` acts on the
  third factor.
  """
  mc, ma, mb = measurement
  rc, ra, rb = resource
  if bobProjector is not None:
    rb = np.asarray((bobProjector @ rb.T).T)
  amplitudes = ((mc.conj() * (ma.conj() @ psi)) @ (mb.conj() @ ra.T)) * rc
  return (np.kron(mc, amplitudes), np.repeat(ma, len(rc), axis=0), np.repeat(mb, len(rc), axis=0),
          np.tile(rb, (len(mc), 1)))


def _bobStates(config, inputState, n, m, space):
  """Unnormalized Bob states tr_12 of the projected perfect and half states."""
  aliceCoherent, alice = _differenceVectors(space, config, 1)
  bobCoherent, bob = _differenceVectors(space, config, 2)
  measurement = _measurementTerms(config, n, m, alice)
  scale = np.full(config.nDim, 1.0 / np.sqrt(config.nDim))
  perfectResource = (scale, alice, bob)
  halfResource = (config.gamma * scale, aliceCoherent, bobCoherent)
  plus = space.vacuumProjector('plus')

  psis = [row @ alice for row in inputState.coeffs]
  perfect = oraclePartialTrace12(inputState.weights, [_projectedState(psi, measurement, perfectResource) for psi in psis])
  half = oraclePartialTrace12(inputState.weights, [_projectedState(psi, measurement, halfResource, plus) for psi in psis])
  return perfect, half


def _engineState(space, result):
  vectors = [oracleCombo(space, b).amplitudes for b in result.bobVectors]
  return sum(w * np.outer(v, v.conj()) for w, v in zip(result.weights, vectors))


def oracleChannelCheck(config, inputState, n, m, cutoff=None, tol=1e-6):
  if config.modeDim > MAX_ORACLE_MODES:
    raise ResourceLimitError('Oracle runs need M <= {0}, got M = {1}.'.format(MAX_ORACLE_MODES, config.modeDim))
  if config.density > MAX_ORACLE_DENSITY:
    raise ResourceLimitError('Oracle runs need d <= {0}, got d = {1}.'.format(MAX_ORACLE_DENSITY, config.density))
  cutoff = defaultCutoff(config) if cutoff is None else cutoff
  if cutoff > MAX_ORACLE_CUTOFF:
    raise ResourceLimitError('Oracle cutoff {0} exceeds {1}.'.format(cutoff, MAX_ORACLE_CUTOFF))

  space = TruncatedFock(config.modeDim, cutoff)
  perfectState, halfState = _bobStates(config, inputState, n, m, space)
  perfect = channelPerfect(config, inputState, n, m)
  half = channelHalf(config, inputState, n, m)

  normSq = 0.5 * config.density
  tail = exponentialTail(normSq, cutoff) * np.exp(-normSq)
  values = {
      'perfect probability': {'engine': perfect.probability, 'oracle': float(np.trace(perfectState).real)},
      'half probability': {'engine': half.probability, 'oracle': float(np.trace(halfState).real)},
      'perfect state': {'deviation': float(np.max(np.abs(perfectState - _engineState(space, perfect))))},
      'half state': {'deviation': float(np.max(np.abs(halfState - _engineState(space, half))))},
  }
  report = OracleReport(config.nDim, config.density, n, m, cutoff, space.dim, tail,
                        max(tol, 100.0 * tail / config.oneMinusQ**2), values)
  logInfo('Detailed', 'Oracle check (N = {0}, d = {1}, n = {2}, m = {3}, cutoff {4}, dim {5}): deviation {6:.3e}',
          config.nDim, config.density, n, m, cutoff, space.dim, report.deviation)
  return report


def oracleHalfAggregate(config, inputState, cutoff=None):
  """Sum of the post-selected half-model probabilities over all outcomes, in the oracle space."""
  cutoff = defaultCutoff(config) if cutoff is None else cutoff
  space = TruncatedFock(config.modeDim, cutoff)
  total = 0.0
  for n in range(1, config.nDim + 1):
    for m in range(1, config.nDim + 1):
      _, halfState = _bobStates(config, inputState, n, m, space)
      total += np.trace(halfState).real
  return float(total)
