#! /usr/bin/env python3
# One-particle space C^M: mode vectors, mode operators and splitting pairs.

import numpy as np
import scipy.linalg

from .errors import InvalidDimensionError, DimensionMismatchError, NormViolationError, InvariantViolationError

SPLITTING_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-10


def _frozen(array):
  array = np.array(array, dtype=complex)
  array.setflags(write=False)
  return array


def asModeVector(entries, dim=None):
  v = np.asarray(entries, dtype=complex)
  if v.ndim != 1 or v.shape[0] < 1:
    raise DimensionMismatchError('Mode vector must be a non-empty 1-d array, got shape {0}.'.format(v.shape))
  if dim is not None and v.shape[0] != dim:
    raise DimensionMismatchError('Mode vector has dimension {0}, expected {1}.'.format(v.shape[0], dim))
  if not np.all(np.isfinite(v)):
    raise InvariantViolationError('Mode vector has non-finite entries.')
  return v


def operatorNorm(op):
  return scipy.linalg.norm(op, 2)


def asModeOperator(entries, dim=None, unitary=False, contraction=False, tol=NORM_TOLERANCE):
  op = np.asarray(entries, dtype=complex)
  if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] < 1:
    raise DimensionMismatchError('Mode operator must be a square matrix, got shape {0}.'.format(op.shape))
  if dim is not None and op.shape[0] != dim:
    raise DimensionMismatchError('Mode operator acts on C^{0}, expected C^{1}.'.format(op.shape[0], dim))
  if not np.all(np.isfinite(op)):
    raise InvariantViolationError('Mode operator has non-finite entries.')
  if unitary:
    residual = np.max(np.abs(op.conj().T @ op - np.eye(op.shape[0])))
    if residual > tol:
      raise NormViolationError('Operator claimed unitary deviates from unitarity by {0:.3e}.'.format(residual))
  if contraction and operatorNorm(op) > 1.0 + tol:
    raise NormViolationError('Operator norm {0:.12f} exceeds 1.'.format(operatorNorm(op)))
  return op


def scaledMultiplication(scalar, dim):
  if dim < 1:
    raise InvalidDimensionError('Mode space dimension must be positive, got {0}.'.format(dim))
  return complex(scalar) * np.eye(dim, dtype=complex)


class SplittingPair:
  """
  A beam-splitting pair (K1, K2) together with the unitary T and the
  orthonormal system g_1..g_N it acts on.

  All structural identities are checked on construction:

    K1*K1 + K2*K2 = 1
    T unitary and T K1 g_k = K2 g_k
    <K1 g_k, K1 g_j> = delta_kj / 2
    {g_k} orthonormal
  """

  def __init__(self, k1, k2, t, basis, kind='custom', tol=SPLITTING_TOLERANCE):
    k1 = asModeOperator(k1)
    dim = k1.shape[0]
    k2 = asModeOperator(k2, dim)
    t = asModeOperator(t, dim)
    basis = np.array([asModeVector(g, dim) for g in basis], dtype=complex)
    if basis.shape[0] < 1:
      raise InvalidDimensionError('Splitting basis must contain at least one vector.')

    self.kind = kind
    self.k1 = _frozen(k1)
    self.k2 = _frozen(k2)
    self.t = _frozen(t)
    self.basis = _frozen(basis)
    self.tol = tol

    for name, value in self.residuals().items():
      if value > tol:
        raise InvariantViolationError("Splitting pair violates '{0}' by {1:.3e}.".format(name, value))

  @property
  def dim(self):
    return self.k1.shape[0]

  @property
  def size(self):
    return self.basis.shape[0]

  def residuals(self):
    identity = np.eye(self.dim)
    # Rows of basis are g_k, so k1 images are rows of basis @ k1.T
    k1g = self.basis @ self.k1.T
    k2g = self.basis @ self.k2.T
    return {
        'completeness': np.max(np.abs(self.k1.conj().T @ self.k1 + self.k2.conj().T @ self.k2 - identity)),
        'unitarity': np.max(np.abs(self.t.conj().T @ self.t - identity)),
        'intertwining': np.max(np.abs(k1g @ self.t.T - k2g)),
        'half norms': np.max(np.abs(k1g.conj() @ k1g.T - 0.5 * np.eye(self.size))),
        'orthonormality': np.max(np.abs(self.basis.conj() @ self.basis.T - np.eye(self.size))),
    }

  def amplitudeModes(self, amplitude, side=1):
    """Rows a K_side g_k for k = 1..N."""
    op = self.k1 if side == 1 else self.k2
    return amplitude * (self.basis @ op.T)


def makeSplitting(kind, n, phase=0.0):
  kind = kind.lower()
  if n < 1:
    raise InvalidDimensionError('Splitting needs n >= 1, got {0}.'.format(n))

  if kind == 'half':
    rotation = np.exp(1j * phase)
    k1 = np.eye(n) / np.sqrt(2.0)
    k2 = rotation * np.eye(n) / np.sqrt(2.0)
    t = rotation * np.eye(n)
    return SplittingPair(k1, k2, t, np.eye(n), kind='half')

  if kind == 'orthogonal':
    if phase != 0.0:
      raise InvariantViolationError('Phased splittings are only defined for the half splitting.')
    k1 = np.diag(np.concatenate([np.ones(n), np.zeros(n)]))
    k2 = np.diag(np.concatenate([np.zeros(n), np.ones(n)]))
    swap = np.zeros((2 * n, 2 * n))
    swap[:n, n:] = np.eye(n)
    swap[n:, :n] = np.eye(n)
    basis = np.hstack([np.eye(n), np.eye(n)]) / np.sqrt(2.0)
    return SplittingPair(k1, k2, swap, basis, kind='orthogonal')

  raise InvariantViolationError("Splitting kind '{0}' not recognized. Use 'half' or 'orthogonal'.".format(kind))


def customSplitting(k1, k2, t, basis):
  return SplittingPair(k1, k2, t, basis, kind='custom')
