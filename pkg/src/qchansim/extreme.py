"""Generalized extreme channels and their two-component mixtures.

An extreme channel has the two Kraus operators ``M_i = R_n(2 phi) K_i R_m(2 delta)``
with ``K_0 = diag(cos beta, cos alpha)`` and ``K_1 = [[0, sin alpha], [sin beta, 0]]``.
Mixing two of them with weight ``p`` gives the 17-parameter ansatz used by the
decomposer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qchansim.channels import Choi, Kraus, kraus_to_choi
from qchansim.numerics import I2, X, Y, Z

TWO_PI = 2 * math.pi
AXIS_TOL = 1e-12
PLANE_TOL = 1e-3


class NonUnitAxis(ValueError):
    pass


def wrap_pi(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.remainder(angle, TWO_PI)
    return math.pi if a == -math.pi else a


def wrap_2pi(angle: float) -> float:
    """Wrap to [0, 2pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0:
        a += TWO_PI
    return 0.0 if a == TWO_PI else a


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > AXIS_TOL:
        raise NonUnitAxis(f"{name} must be a unit 3-vector, got {v}")
    return v


def axis_from_plane(c1: float, c2: float, sign: int = 1) -> np.ndarray:
    """Rebuild a unit axis from its first two components.

    The third component is ``sign * sqrt(1 - c1^2 - c2^2)``; tables list only
    two components so the positive branch is the default. Four-decimal
    printing can push ``c1^2 + c2^2`` slightly above 1; up to ``PLANE_TOL``
    this is accepted and the vector renormalized.
    """
    r2 = c1 * c1 + c2 * c2
    if r2 > 1 + PLANE_TOL:
        raise NonUnitAxis(f"components ({c1}, {c2}) lie outside the unit disc")
    c3 = math.sqrt(max(0.0, 1.0 - r2))
    v = np.array([c1, c2, sign * c3])
    return v / np.linalg.norm(v)


def axis_from_spherical(theta: float, phi: float) -> np.ndarray:
    s = math.sin(theta)
    return np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])


def axis_to_spherical(axis) -> tuple[float, float]:
    x, y, z = axis
    return math.atan2(math.hypot(x, y), z), math.atan2(y, x)


def rotation(axis, two_theta: float) -> np.ndarray:
    """``R_r(2 theta) = exp(-i theta r.sigma) = cos(theta) I - i sin(theta) r.sigma``."""
    a = _unit(axis, "axis")
    t = 0.5 * two_theta
    return math.cos(t) * I2 - 1j * math.sin(t) * (a[0] * X + a[1] * Y + a[2] * Z)


def kraus_pair(alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    k0 = np.array([[math.cos(beta), 0], [0, math.cos(alpha)]], dtype=complex)
    k1 = np.array([[0, math.sin(alpha)], [math.sin(beta), 0]], dtype=complex)
    return k0, k1


@dataclass(frozen=True)
class CircuitAngles:
    gamma1: float
    gamma2: float


def circuit_angles(alpha: float, beta: float) -> CircuitAngles:
    """Ancilla rotation angles ``2 gamma_{1,2} = beta -/+ alpha +/- pi/2``, wrapped to (-pi, pi]."""
    g1 = 0.5 * (beta - alpha + math.pi / 2)
    g2 = 0.5 * (beta + alpha - math.pi / 2)
    return CircuitAngles(wrap_pi(g1), wrap_pi(g2))


_Z_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ExtremeParams:
    """Eight parameters of one extreme channel.

    ``delta`` and ``phi`` are the half-angles of the pre-rotation
    ``R_m(2 delta)`` and post-rotation ``R_n(2 phi)``.
    """

    alpha: float = 0.0
    beta: float = 0.0
    delta: float = 0.0
    phi: float = 0.0
    m_axis: tuple = field(default=_Z_AXIS)
    n_axis: tuple = field(default=_Z_AXIS)

    def __post_init__(self):
        for name in ("m_axis", "n_axis"):
            object.__setattr__(self, name, tuple(float(c) for c in _unit(getattr(self, name), name)))
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= TWO_PI + 1e-12:
                raise ValueError(f"{name}={v} outside [0, 2pi]")

    @classmethod
    def make(cls, alpha, beta, delta=0.0, phi=0.0, m_axis=_Z_AXIS, n_axis=_Z_AXIS) -> "ExtremeParams":
        """Construct with ``alpha``/``beta`` taken mod 2pi and half-angles wrapped to (-pi, pi]."""
        return cls(wrap_2pi(alpha), wrap_2pi(beta), wrap_pi(delta), wrap_pi(phi), m_axis, n_axis)

    def circuit_angles(self) -> CircuitAngles:
        return circuit_angles(self.alpha, self.beta)

    def to_json(self) -> dict:
        m, n = self.m_axis, self.n_axis
        return {
            "m1": m[0], "m2": m[1], "m3": m[2],
            "n1": n[0], "n2": n[1], "n3": n[2],
            "alpha": self.alpha, "beta": self.beta,
            "delta": self.delta, "varphi": self.phi,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ExtremeParams":
        """Read table-style fields; missing ``m3``/``n3`` use the positive branch."""
        def axis(prefix):
            c1, c2 = float(doc[prefix + "1"]), float(doc[prefix + "2"])
            if prefix + "3" in doc:
                return axis_from_plane(c1, c2, 1 if float(doc[prefix + "3"]) >= 0 else -1)
            return axis_from_plane(c1, c2)

        return cls.make(
            float(doc["alpha"]), float(doc["beta"]),
            float(doc.get("delta", 0.0)), float(doc.get("varphi", 0.0)),
            axis("m"), axis("n"),
        )


@dataclass(frozen=True)
class Decomposition17:
    e1: ExtremeParams
    e2: ExtremeParams
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixing probability p={self.p} outside [0, 1]")

    @classmethod
    def from_times(cls, e1: ExtremeParams, e2: ExtremeParams, t1: float, t2: float) -> "Decomposition17":
        """Mixture weight from collection times, ``p = t1 / (t1 + t2)``."""
        if t1 < 0 or t2 < 0 or t1 + t2 <= 0:
            raise ValueError("collection times must be non-negative with a positive sum")
        return cls(e1, e2, t1 / (t1 + t2))

    def swapped(self) -> "Decomposition17":
        return Decomposition17(self.e2, self.e1, 1.0 - self.p)

    def to_json(self) -> dict:
        return {"e1": self.e1.to_json(), "e2": self.e2.to_json(), "p": self.p}

    @classmethod
    def from_json(cls, doc: dict) -> "Decomposition17":
        return cls(ExtremeParams.from_json(doc["e1"]), ExtremeParams.from_json(doc["e2"]), float(doc["p"]))


def extreme_ops(p: ExtremeParams) -> tuple[np.ndarray, np.ndarray]:
    pre = rotation(p.m_axis, 2 * p.delta)
    post = rotation(p.n_axis, 2 * p.phi)
    k0, k1 = kraus_pair(p.alpha, p.beta)
    return post @ k0 @ pre, post @ k1 @ pre


def build_extreme(p: ExtremeParams) -> Kraus:
    return Kraus(extreme_ops(p))


def build_mixture(d: Decomposition17) -> Choi:
    """Choi matrix of ``p E1 + (1 - p) E2``."""
    j1 = kraus_to_choi(build_extreme(d.e1)).matrix
    j2 = kraus_to_choi(build_extreme(d.e2)).matrix
    return Choi(d.p * j1 + (1.0 - d.p) * j2)
