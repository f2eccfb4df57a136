"""Fit a two-extreme-channel mixture to a target channel.

The 17 free parameters are searched by Nelder-Mead simplex on an
unconstrained encoding: the four angles of each extreme channel are left
unwrapped, each rotation axis is stored as spherical angles, and ``p`` goes
through a logistic squash. Restart 0 starts from an identity-like point (or a
caller-supplied decomposition); later restarts draw random starting points
from their own RNG streams.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from qchansim.channels import Channel, Choi, as_choi, validate
from qchansim.extreme import (
    Decomposition17,
    ExtremeParams,
    axis_from_spherical,
    axis_to_spherical,
    build_mixture,
)
from qchansim.numerics import X, Y, Z
from qchansim.randomgen import RESTART, check_seed, stream

log = logging.getLogger(__name__)

TARGET_TOL = 1e-6
INITIAL_STEP = 0.5
N_PARAMS = 17
_LOGIT_CLIP = 36.0


class InvalidTargetChannel(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, result: "DecompositionResult"):
        super().__init__(
            f"tolerance not reached after {result.objective_evals} evaluations "
            f"(best error {result.achieved_error:.3e})"
        )
        self.result = result


@dataclass(frozen=True)
class DecomposeConfig:
    tolerance: float = 1e-3
    max_restarts: int = 20
    max_iterations: int = 4000
    seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_restarts < 1 or self.max_iterations < 1:
            raise ValueError("max_restarts and max_iterations must be >= 1")
        check_seed(self.seed)


@dataclass(frozen=True)
class DecompositionResult:
    params: Decomposition17
    achieved_error: float
    objective_evals: int
    restart_index: int
    converged: bool

    def to_json(self) -> dict:
        doc = self.params.to_json()
        doc.update(
            achieved_error=self.achieved_error,
            objective_evals=self.objective_evals,
            restart_index=self.restart_index,
            converged=self.converged,
        )
        return doc


def _normalized(j: np.ndarray) -> np.ndarray:
    return j / np.trace(j).real


def choi_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance between two Choi matrices after normalizing each to unit trace."""
    d = _normalized(a) - _normalized(b)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def objective(d: Decomposition17, target: Channel) -> float:
    return choi_distance(build_mixture(d).matrix, as_choi(target).matrix)


# -- unconstrained encoding --------------------------------------------------

def encode(d: Decomposition17) -> np.ndarray:
    def one(e: ExtremeParams):
        tm, pm = axis_to_spherical(e.m_axis)
        tn, pn = axis_to_spherical(e.n_axis)
        return [e.alpha, e.beta, e.delta, e.phi, tm, pm, tn, pn]

    p = min(max(d.p, 0.0), 1.0)
    if p <= 0.0:
        u = -_LOGIT_CLIP
    elif p >= 1.0:
        u = _LOGIT_CLIP
    else:
        u = max(-_LOGIT_CLIP, min(_LOGIT_CLIP, math.log(p / (1 - p))))
    return np.array(one(d.e1) + one(d.e2) + [u])


def _logistic(u: float) -> float:
    return 1.0 / (1.0 + math.exp(-u))


def decode(x) -> Decomposition17:
    def one(v):
        a, b, de, ph, tm, pm, tn, pn = (float(c) for c in v)
        return ExtremeParams.make(a, b, de, ph, axis_from_spherical(tm, pm), axis_from_spherical(tn, pn))

    p = _logistic(float(x[16]))
    # p is exactly 0 or 1 only at the clip, snap so presets round-trip
    if x[16] >= _LOGIT_CLIP:
        p = 1.0
    elif x[16] <= -_LOGIT_CLIP:
        p = 0.0
    return Decomposition17(one(x[:8]), one(x[8:16]), p)


def _extreme_vecs(v) -> np.ndarray:
    """Row-major vectorized Kraus operators of one extreme channel, as columns."""
    a, b, de, ph, tm, pm, tn, pn = v
    sm, sn = math.sin(tm), math.sin(tn)
    m = (sm * math.cos(pm), sm * math.sin(pm), math.cos(tm))
    n = (sn * math.cos(pn), sn * math.sin(pn), math.cos(tn))
    pre = math.cos(de) * np.eye(2) - 1j * math.sin(de) * (m[0] * X + m[1] * Y + m[2] * Z)
    post = math.cos(ph) * np.eye(2) - 1j * math.sin(ph) * (n[0] * X + n[1] * Y + n[2] * Z)
    k0 = np.array([[math.cos(b), 0.0], [0.0, math.cos(a)]])
    k1 = np.array([[0.0, math.sin(a)], [math.sin(b), 0.0]])
    return np.stack([(post @ k0 @ pre).reshape(-1), (post @ k1 @ pre).reshape(-1)], axis=1)


def _trial_choi(x) -> np.ndarray:
    p = _logistic(x[16]) if abs(x[16]) < _LOGIT_CLIP else float(x[16] > 0)
    v1 = _extreme_vecs(x[:8])
    v2 = _extreme_vecs(x[8:16])
    return p * (v1 @ v1.conj().T) + (1 - p) * (v2 @ v2.conj().T)


def _encoded_objective(x, target_normalized: np.ndarray) -> float:
    d = 0.5 * _trial_choi(x) - target_normalized
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(d))))


def identity_start() -> Decomposition17:
    e = ExtremeParams()
    return Decomposition17(e, e, 0.5)


def random_start(seed: int, restart: int) -> np.ndarray:
    rng = stream(seed, RESTART, restart)
    x = np.empty(N_PARAMS)
    for off in (0, 8):
        x[off:off + 4] = rng.uniform(0.0, 2 * np.pi, 4)
        for ax in (off + 4, off + 6):
            x[ax] = math.acos(1.0 - 2.0 * rng.uniform())
            x[ax + 1] = rng.uniform(0.0, 2 * np.pi)
    p = rng.uniform()
    x[16] = math.log(p / (1 - p)) if 0 < p < 1 else 0.0
    return x


def _simplex(x0: np.ndarray) -> np.ndarray:
    return np.vstack([x0, x0 + INITIAL_STEP * np.eye(N_PARAMS)])


def check_target(target: Channel, tol: float = TARGET_TOL) -> Choi:
    j = as_choi(target)
    rep = validate(j, tol=tol)
    if not (rep.hermitian and rep.psd and rep.trace_preserving):
        raise InvalidTargetChannel(
            f"target is not CPTP within {tol:g} (min eigenvalue {rep.min_eigenvalue:.3e}, "
            f"TP violation {rep.tp_violation:.3e})"
        )
    return j


def decompose(
    target: Channel,
    cfg: DecomposeConfig = DecomposeConfig(),
    init: Decomposition17 | None = None,
    raise_on_budget: bool = False,
) -> DecompositionResult:
    """Search for ``p, E1, E2`` with ``p E1 + (1-p) E2`` close to ``target``.

    Restarts run in index order and stop at the first one whose error is
    within ``cfg.tolerance``. The best result so far is kept; ties go to the
    lower restart index.

    Parameters
    ----------
    target
        Any channel representation; must be CPTP within 1e-6.
    cfg
        Tolerance, budgets and seed.
    init
        Optional starting decomposition for restart 0.
    raise_on_budget
        If true, raise ``BudgetExhausted`` (carrying the best result) when no
        restart reaches the tolerance; otherwise return it with
        ``converged=False``.
    """
    j = check_target(target).matrix
    tn = _normalized(j)
    best: tuple[float, Decomposition17, int] | None = None
    evals = 0
    for restart in range(cfg.max_restarts):
        if restart == 0:
            x0 = encode(init if init is not None else identity_start())
        else:
            x0 = random_start(cfg.seed, restart)
        res = minimize(
            _encoded_objective,
            x0,
            args=(tn,),
            method="Nelder-Mead",
            options=dict(
                maxiter=cfg.max_iterations,
                maxfev=10**9,
                xatol=np.inf,
                fatol=cfg.tolerance / 10,
                adaptive=True,
                initial_simplex=_simplex(x0),
            ),
        )
        evals += res.nfev
        params = decode(res.x)
        err = choi_distance(build_mixture(params).matrix, j)
        log.debug("restart %d: error %.3e after %d evaluations", restart, err, res.nfev)
        if best is None or err < best[0]:
            best = (err, params, restart)
        if best[0] <= cfg.tolerance:
            break
    err, params, restart = best
    result = DecompositionResult(params, err, evals, restart, err <= cfg.tolerance)
    if not result.converged and raise_on_budget:
        raise BudgetExhausted(result)
    return result
