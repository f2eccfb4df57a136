"""Weak measurement and reversal around an amplitude-damping channel.

The protected map is ``rho -> N E_AD(M rho M^H) N^H`` with
``M = diag(1, sqrt(1 - p1))`` and ``N = diag(sqrt(1 - p2), 1)``. The optimal
reversal strength is ``p2 = p1 + lambda (1 - p1)``; without knowledge of
``lambda`` one uses ``p2 = p1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from qchansim.channels import Kraus, apply
from qchansim.noise_presets import NoiseKind, make_noise
from qchansim.numerics import state_fidelity

SUCCESS_FLOOR = 1e-12


class ZeroSuccessProbability(ArithmeticError):
    pass


class Strategy(enum.Enum):
    NONE = "none"
    NONOPT = "nonopt"
    OPT = "opt"


@dataclass(frozen=True)
class WeakMeasConfig:
    p1: float = 0.8
    strategy: Strategy = Strategy.OPT
    lambda_grid: tuple = field(default=tuple(np.linspace(0.0, 1.0, 21)))

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        if not 0.0 <= self.p1 < 1.0:
            raise ValueError(f"p1 must lie in [0, 1), got {self.p1}")
        g = self.lambda_grid
        if any(not 0.0 <= x <= 1.0 for x in g) or any(a > b for a, b in zip(g, g[1:])):
            raise ValueError("lambda_grid must be sorted and inside [0, 1]")


@dataclass(frozen=True)
class ProtectionPoint:
    lam: float
    fidelity: float
    success_probability: float


def reversal_strength(p1: float, lam: float, strategy: Strategy) -> float:
    strategy = Strategy(strategy)
    if strategy is Strategy.NONE:
        return 0.0
    if strategy is Strategy.NONOPT:
        return p1
    return p1 + lam * (1.0 - p1)


def protocol_kraus(lam: float, p1: float, strategy: Strategy) -> Kraus:
    """Kraus operators ``N K_i M`` of the (trace-decreasing) protected map."""
    strategy = Strategy(strategy)
    if strategy is Strategy.NONE:
        p1 = 0.0
    p2 = reversal_strength(p1, lam, strategy)
    m = np.diag([1.0, math.sqrt(1.0 - p1)]).astype(complex)
    n = np.diag([math.sqrt(max(0.0, 1.0 - p2)), 1.0]).astype(complex)
    ad = make_noise(NoiseKind.AMPLITUDE_DAMPING, lam)
    return Kraus(tuple(n @ k @ m for k in ad.ops))


def protect(rho, lam: float, cfg: WeakMeasConfig) -> ProtectionPoint:
    rho = np.asarray(rho, dtype=complex)
    out = apply(protocol_kraus(lam, cfg.p1, cfg.strategy), rho)
    success = float(np.trace(out).real)
    if success < SUCCESS_FLOOR:
        raise ZeroSuccessProbability(f"post-selection succeeds with probability {success:.3e}")
    f = state_fidelity(out / success, rho)
    return ProtectionPoint(float(lam), min(max(f, 0.0), 1.0), min(success, 1.0))


def sweep(rho, cfg: WeakMeasConfig) -> list[ProtectionPoint]:
    return [protect(rho, lam, cfg) for lam in cfg.lambda_grid]
