"""The four standard qubit noise channels and their extreme-channel presets.

Presets are derived from the Kraus forms, not copied from printed tables:

* amplitude damping: ``beta = 0``, ``sin^2 alpha = lambda``, ``p = 1``;
* bit flip: ``alpha = beta`` with ``sin^2 alpha = lambda``, ``p = 1``;
* phase flip: identity mixed with ``alpha = pi`` (the Z channel), ``p = 1 - lambda``;
* depolarizing: a bit-flip-like extreme channel with ``sin^2 a = lambda / (3 - 2 lambda)``
  mixed with ``rho -> (Y rho Y + Z rho Z)/2`` (``alpha = beta = pi/4`` after a
  Pauli-Y pre-rotation), ``p = 1 - 2 lambda / 3``.

Single-extreme presets set ``e2 = e1`` so the mixture is independent of ``p``.
"""

import enum
import math

import numpy as np

from qchansim.channels import Kraus
from qchansim.extreme import Decomposition17, ExtremeParams
from qchansim.numerics import I2, X, Y, Z


class LambdaOutOfRange(ValueError):
    pass


class NoiseKind(enum.Enum):
    AMPLITUDE_DAMPING = "amplitude_damping"
    BIT_FLIP = "bit_flip"
    PHASE_FLIP = "phase_flip"
    DEPOLARIZING = "depolarizing"


def _check(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise LambdaOutOfRange(f"lambda must lie in [0, 1], got {lam}")
    return lam


def make_noise(kind: NoiseKind, lam: float) -> Kraus:
    lam = _check(lam)
    kind = NoiseKind(kind)
    if kind is NoiseKind.AMPLITUDE_DAMPING:
        k0 = np.array([[1, 0], [0, math.sqrt(1 - lam)]], dtype=complex)
        k1 = np.array([[0, math.sqrt(lam)], [0, 0]], dtype=complex)
        return Kraus((k0, k1))
    if kind is NoiseKind.BIT_FLIP:
        return Kraus((math.sqrt(1 - lam) * I2, math.sqrt(lam) * X))
    if kind is NoiseKind.PHASE_FLIP:
        return Kraus((math.sqrt(1 - lam) * I2, math.sqrt(lam) * Z))
    s = math.sqrt(lam / 3)
    return Kraus((math.sqrt(1 - lam) * I2, s * X, s * Y, s * Z))


Y_AXIS = (0.0, 1.0, 0.0)
# alpha = beta = pi/4 after a Pauli-Y pre-rotation: rho -> (Y rho Y + Z rho Z)/2
YZ_CHANNEL = ExtremeParams.make(math.pi / 4, math.pi / 4, delta=math.pi / 2, m_axis=Y_AXIS)
Z_CHANNEL = ExtremeParams.make(math.pi, 0.0)
IDENTITY = ExtremeParams()


def preset_decomposition(kind: NoiseKind, lam: float) -> Decomposition17:
    lam = _check(lam)
    kind = NoiseKind(kind)
    if kind is NoiseKind.AMPLITUDE_DAMPING:
        e = ExtremeParams.make(math.asin(math.sqrt(lam)), 0.0)
        return Decomposition17(e, e, 1.0)
    if kind is NoiseKind.BIT_FLIP:
        a = math.asin(math.sqrt(lam))
        e = ExtremeParams.make(a, a)
        return Decomposition17(e, e, 1.0)
    if kind is NoiseKind.PHASE_FLIP:
        return Decomposition17(IDENTITY, Z_CHANNEL, 1.0 - lam)
    a = math.asin(math.sqrt(lam / (3 - 2 * lam)))
    return Decomposition17(ExtremeParams.make(a, a), YZ_CHANNEL, 1.0 - 2 * lam / 3)
