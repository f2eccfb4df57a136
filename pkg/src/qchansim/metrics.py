"""Fidelities and distances between qubit channels.

Every channel metric is computed on trace-normalized Choi matrices, which are
unitarily equivalent to the normalized chi matrices, so results do not depend
on the representation a channel was given in.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from qchansim.channels import Channel, as_choi, validate
from qchansim.numerics import PSD_TOL, X, Y, Z, psd_sqrt, trace_norm

CHANNEL_TOL = 1e-6


class InvalidChannel(ValueError):
    pass


class OutOfRange(ValueError):
    pass


def _checked_unit(ch: Channel, psd_tol: float) -> np.ndarray:
    choi = as_choi(ch)
    rep = validate(choi, tol=CHANNEL_TOL)
    if not (rep.hermitian and rep.trace_preserving):
        raise InvalidChannel(
            f"channel is not Hermitian/trace-preserving within {CHANNEL_TOL:g} "
            f"(TP violation {rep.tp_violation:.3e})"
        )
    if rep.min_eigenvalue < -psd_tol:
        raise InvalidChannel(f"channel is not CP: Choi eigenvalue {rep.min_eigenvalue:.3e}")
    j = 0.5 * (choi.matrix + choi.matrix.conj().T)
    return j / np.trace(j).real


def process_fidelity(a: Channel, b: Channel, psd_tol: float = PSD_TOL) -> float:
    """``F_P = (Tr sqrt(sqrt(A) B sqrt(A)))**2`` on normalized Choi matrices.

    Negative eigenvalues no lower than ``-psd_tol`` are clamped to zero.
    Reconstructions from finite statistics are often slightly non-positive;
    pass a looser ``psd_tol`` deliberately when comparing against one.
    """
    ja = _checked_unit(a, psd_tol)
    jb = _checked_unit(b, psd_tol)
    sa = psd_sqrt(ja, tol=psd_tol)
    inner = sa @ jb @ sa
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def _check_unit_interval(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {x}")
    return x


def average_fidelity(fp: float) -> float:
    return (2 * _check_unit_interval(fp, "process fidelity") + 1) / 3


def trace_distance(a: Channel, b: Channel) -> float:
    ja, jb = as_choi(a).matrix, as_choi(b).matrix
    d = ja / np.trace(ja).real - jb / np.trace(jb).real
    return 0.5 * trace_norm(d)


def fidelity_distance_bounds(fp: float) -> tuple[float, float]:
    """``1 - sqrt(F) <= D <= sqrt(1 - F)``."""
    fp = _check_unit_interval(fp, "process fidelity")
    return 1.0 - math.sqrt(fp), math.sqrt(1.0 - fp)


def bloch_grid(step_deg: float = 1.0) -> np.ndarray:
    """Unit Bloch vectors on a regular polar/azimuthal grid, poles included once."""
    thetas = np.deg2rad(np.arange(0.0, 180.0 + 1e-9, step_deg))
    phis = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    pts = [np.array([[0.0, 0.0, 1.0]])]
    for t in thetas[1:-1]:
        pts.append(np.stack([np.sin(t) * np.cos(phis), np.sin(t) * np.sin(phis), np.full_like(phis, np.cos(t))], 1))
    pts.append(np.array([[0.0, 0.0, -1.0]]))
    return np.concatenate(pts)


def affine_map(ch: Channel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Action on Bloch vectors: ``Tr E(rho) = t0 + s.r`` and ``E(rho)`` Bloch part ``T r + c``.

    Returns ``(T, c, (t0, s))`` stacked so a whole grid of inputs can be mapped
    at once. Trace terms are kept so trace-decreasing maps work too.
    """
    j4 = as_choi(ch).matrix.reshape(2, 2, 2, 2)
    basis = [np.eye(2, dtype=complex), X, Y, Z]
    # E(P_k / 2) for k = 0..3 as 2x2 outputs
    outs = [np.einsum("aibj,ij->ab", j4, p / 2) for p in basis]
    # coefficient of output Pauli l in E(P_k / 2): Tr(P_l E(P_k/2))
    coef = np.array([[np.trace(basis[l] @ outs[k]).real for k in range(4)] for l in range(4)])
    return coef[1:, 1:], coef[1:, 0], coef[0]


def _output_bloch(ch: Channel, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    t, c, tr = affine_map(ch)
    return r @ t.T + c, tr[0] + r @ tr[1:]


def diamond_bounds(a: Channel, b: Channel, grid_step_deg: float = 1.0) -> tuple[float, float]:
    """Bracket for the diamond distance ``0.5 * ||A - B||_diamond``.

    The upper bound is ``||J_a - J_b||_1 / 2`` (unnormalized Choi). The lower
    bound is the larger of ``||J_a - J_b||_1 / 4`` and the best output trace
    distance over pure inputs on a Bloch-sphere grid.
    """
    ja, jb = as_choi(a).matrix, as_choi(b).matrix
    tn = trace_norm(ja - jb)
    r = bloch_grid(grid_step_deg)
    va, ta = _output_bloch(a, r)
    vb, tb = _output_bloch(b, r)
    # E(rho) = (t I + v.sigma)/2, so the difference has eigenvalues (dt +- |dv|)/2
    dv = np.linalg.norm(va - vb, axis=1)
    dt = ta - tb
    grid = (np.abs(dt + dv) + np.abs(dt - dv)) / 4
    lower = max(tn / 4, float(grid.max()))
    upper = tn / 2
    return min(lower, upper), upper


@dataclass(frozen=True)
class MetricReport:
    process_fidelity: float
    average_fidelity: float
    trace_distance: float
    fid_dist_bounds: tuple
    diamond_bounds: tuple

    def to_json(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


def compare(a: Channel, b: Channel, psd_tol: float = PSD_TOL) -> MetricReport:
    fp = process_fidelity(a, b, psd_tol=psd_tol)
    return MetricReport(
        process_fidelity=fp,
        average_fidelity=average_fidelity(fp),
        trace_distance=trace_distance(a, b),
        fid_dist_bounds=fidelity_distance_bounds(fp),
        diamond_bounds=diamond_bounds(a, b),
    )
