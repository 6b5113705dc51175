#! /usr/bin/env python3
# Exceptions raised by fockteleport. Every message carries the project tag,
# so a caught error prints the same way as one reaching the console.

ERROR_PREFIX = '[FockTeleport] Error: '


class FockTeleportError(RuntimeError):

  def __init__(self, message):
    self.detail = message
    super().__init__(ERROR_PREFIX + message)


class InvalidDimensionError(FockTeleportError):
  pass


class DimensionMismatchError(FockTeleportError):
  pass


class ArityMismatchError(FockTeleportError):
  pass


class NormViolationError(FockTeleportError):
  pass


class InvariantViolationError(FockTeleportError):
  pass


class DegenerateDictionaryError(FockTeleportError):
  pass


class ZeroProbabilityError(FockTeleportError):
  pass


class UndefinedActionError(FockTeleportError):
  pass


class IndexRangeError(FockTeleportError):
  pass


class CutoffError(FockTeleportError):
  pass


class ResourceLimitError(FockTeleportError):
  pass


class ConfigurationError(FockTeleportError):
  pass
