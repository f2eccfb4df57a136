"""Half- and quarter-wave plate models and a rotation-to-plate compiler.

With fast-axis angles measured from the vertical,

    U_HWP(t) = [[cos 2t, -sin 2t], [-sin 2t, -cos 2t]]
    U_QWP(x) = [[1 + i cos 2x, -i sin 2x], [-i sin 2x, 1 - i cos 2x]] / sqrt(2)

Multiplying out ``i * U_QWP(x1) U_HWP(t) U_QWP(x2)`` with ``Theta = x1 - x2``,
``Lambda = 2t - x1 - x2`` and ``Sigma = x1 + x2`` gives ``c I - i v.sigma``
where

    c = -cos(Theta) cos(Lambda)
    v = (cos(Sigma) sin(Lambda), sin(Theta) cos(Lambda), sin(Sigma) sin(Lambda))

``compile_rotation`` inverts this map. All comparisons ignore global phase.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from qchansim.extreme import Decomposition17, ExtremeParams, _unit, rotation

DEGENERATE_TOL = 1e-12


class PlateKind(enum.Enum):
    HWP = "HWP"
    QWP = "QWP"


def wrap_plate(angle: float) -> float:
    """Plates are pi-periodic; wrap to [0, pi)."""
    a = math.fmod(angle, math.pi)
    if a < 0:
        a += math.pi
    return 0.0 if a >= math.pi else a


@dataclass(frozen=True)
class PlateSetting:
    kind: PlateKind
    fast_axis_angle: float

    def __post_init__(self):
        object.__setattr__(self, "kind", PlateKind(self.kind))
        object.__setattr__(self, "fast_axis_angle", wrap_plate(self.fast_axis_angle))

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "angle_deg": round(math.degrees(self.fast_axis_angle), 2),
            "angle_rad": self.fast_axis_angle,
        }


def hwp(angle: float) -> PlateSetting:
    return PlateSetting(PlateKind.HWP, angle)


def qwp(angle: float) -> PlateSetting:
    return PlateSetting(PlateKind.QWP, angle)


def plate_matrix(p: PlateSetting) -> np.ndarray:
    c, s = math.cos(2 * p.fast_axis_angle), math.sin(2 * p.fast_axis_angle)
    if p.kind is PlateKind.HWP:
        return np.array([[c, -s], [-s, -c]], dtype=complex)
    return np.array([[1 + 1j * c, -1j * s], [-1j * s, 1 - 1j * c]]) / math.sqrt(2)


@dataclass(frozen=True)
class PlateStack:
    """Plates in matrix order: the last plate acts on the light first."""

    plates: tuple

    def __post_init__(self):
        if len(self.plates) > 4:
            raise ValueError("a plate stack holds at most four plates")
        object.__setattr__(self, "plates", tuple(self.plates))

    def matrix(self) -> np.ndarray:
        m = np.eye(2, dtype=complex)
        for p in self.plates:
            m = m @ plate_matrix(p)
        return m

    def to_json(self) -> list:
        return [p.to_json() for p in self.plates]


def phase_distance(u, v) -> float:
    """``1 - |Tr(U^H V)| / 2``; zero iff the unitaries agree up to global phase."""
    return 1.0 - abs(np.trace(np.asarray(u).conj().T @ np.asarray(v))) / 2


def compile_ry(two_gamma: float) -> PlateStack:
    """``R_y(2 gamma)`` as HWP(0) followed by HWP(gamma / 2)."""
    return PlateStack((hwp(0.0), hwp(two_gamma / 4)))


def _candidates(c0: float, a: np.ndarray):
    rho = math.hypot(a[0], a[2])
    kappa = math.hypot(c0, a[1])
    for s, sl, cl in itertools.product((1, -1), repeat=3):
        sigma = math.atan2(sl * s * a[2], sl * s * a[0]) if rho > DEGENERATE_TOL else 0.0
        theta = math.atan2(cl * s * a[1], -cl * s * c0) if kappa > DEGENERATE_TOL else 0.0
        lam = math.atan2(sl * rho, cl * kappa)
        x1, x2, tau = 0.5 * (sigma + theta), 0.5 * (sigma - theta), 0.5 * (lam + sigma)
        yield wrap_plate(x1), wrap_plate(tau), wrap_plate(x2)


def compile_rotation(axis, two_theta: float) -> PlateStack:
    """QWP(x1) HWP(tau) QWP(x2) realizing ``R_axis(two_theta)`` up to global phase.

    Among the equivalent solutions the one with the smallest total plate
    angle (each wrapped to [0, pi)) is returned. A zero rotation gives
    QWP(0) HWP(0) QWP(0), which is proportional to the identity.
    """
    r = _unit(axis, "axis")
    t = 0.5 * two_theta
    if abs(math.sin(t)) < DEGENERATE_TOL:
        return PlateStack((qwp(0.0), hwp(0.0), qwp(0.0)))
    c0, a = math.cos(t), math.sin(t) * r
    target = rotation(r, two_theta)
    best = None
    for x1, tau, x2 in _candidates(c0, a):
        stack = PlateStack((qwp(x1), hwp(tau), qwp(x2)))
        if phase_distance(stack.matrix(), target) > 1e-9:
            continue
        key = (round(x1 + tau + x2, 12), x1, tau, x2)
        if best is None or key < best[0]:
            best = (key, stack)
    if best is None:
        raise ArithmeticError("no plate solution reproduced the rotation")
    return best[1]


def compile_extreme(e: ExtremeParams) -> dict:
    g = e.circuit_angles()
    return {
        "pre_rotation": compile_rotation(e.m_axis, 2 * e.delta).to_json(),
        "ry_gamma1": compile_ry(2 * g.gamma1).to_json(),
        "ry_gamma2": compile_ry(2 * g.gamma2).to_json(),
        "post_rotation": compile_rotation(e.n_axis, 2 * e.phi).to_json(),
        "gamma1": g.gamma1,
        "gamma2": g.gamma2,
    }


def compile_decomposition(d: Decomposition17) -> dict:
    return {"e1": compile_extreme(d.e1), "e2": compile_extreme(d.e2), "p": d.p}
