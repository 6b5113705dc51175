from .errors import FockTeleportError
from .config import defaultConfig, loadConfig
from .mode_space import makeSplitting, customSplitting, scaledMultiplication
from .coherent_engine import CoherentCombo, TensorCombo, comboInner, orthonormalize, partialTrace12, fidelity, traceDistance
from .fock_ops import beamSplit, beamSplitAdjoint, secondQuantize, malliavin, skorohod, exchange, vacuumProject, phaseUnitary, shiftUnitary
from .teleport_models import (ModelConfig, InputState, buildInput, buildEntangled, buildMeasurements, channelPerfect, channelRaw,
                              channelHalf, channelFull, channelOmega, stagedProcedure, generalPerfect)
