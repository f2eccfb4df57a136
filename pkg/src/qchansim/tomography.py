"""Simulated single-qubit process tomography by linear inversion.

Probe states |H>, |V>, |D>, |L> are sent through the channel and the output is
measured in the X, Y and Z bases. For a trace-decreasing channel a click is
missing with probability ``1 - Tr E(rho)``, so each setting yields counts for
``+1``, ``-1`` and "lost". From the estimated output states the images of the
matrix units follow from

    |0><1| = |D><D| + i|L><L| - (1 + i)/2 (|H><H| + |V><V|)

and the Choi matrix is converted to chi. No positivity projection is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qchansim.channels import Channel, Choi, PauliChi, apply, choi_to_chi
from qchansim.numerics import X, Y, Z, ket, projector
from qchansim.randomgen import TOMOGRAPHY, check_seed, stream

PROBES = ("H", "V", "D", "L")
BASES = ((1, X), (2, Y), (3, Z))
EXACT = "exact"


@dataclass(frozen=True)
class QptConfig:
    shots: int | str = EXACT
    seed: int = 0

    def __post_init__(self):
        if self.shots != EXACT and (not isinstance(self.shots, (int, np.integer)) or self.shots < 1):
            raise ValueError(f"shots must be a positive integer or {EXACT!r}, got {self.shots!r}")
        check_seed(self.seed)


def _estimate_output(ch: Channel, probe_index: int, cfg: QptConfig) -> np.ndarray:
    rho_out = apply(ch, projector(ket(PROBES[probe_index])))
    trace = float(np.trace(rho_out).real)
    if cfg.shots == EXACT:
        exps = [float(np.trace(p @ rho_out).real) for _, p in BASES]
        return 0.5 * (trace * np.eye(2) + sum(e * p for e, (_, p) in zip(exps, BASES)))
    n = int(cfg.shots)
    exps, traces = [], []
    for b, p in BASES:
        e = float(np.trace(p @ rho_out).real)
        probs = np.clip([(trace + e) / 2, (trace - e) / 2, 1.0 - trace], 0.0, None)
        counts = stream(cfg.seed, TOMOGRAPHY, probe_index, b).multinomial(n, probs / probs.sum())
        exps.append((counts[0] - counts[1]) / n)
        traces.append((counts[0] + counts[1]) / n)
    t = float(np.mean(traces))
    return 0.5 * (t * np.eye(2) + sum(e * p for e, (_, p) in zip(exps, BASES)))


def simulate_qpt(ch: Channel, cfg: QptConfig = QptConfig()) -> PauliChi:
    h, v, d, l = (_estimate_output(ch, i, cfg) for i in range(len(PROBES)))
    e01 = d + 1j * l - 0.5 * (1 + 1j) * (h + v)
    e10 = e01.conj().T
    units = {(0, 0): h, (0, 1): e01, (1, 0): e10, (1, 1): v}
    j = np.zeros((4, 4), dtype=complex)
    for (i, k), out in units.items():
        unit = np.zeros((2, 2))
        unit[i, k] = 1
        j += np.kron(out, unit)
    j = 0.5 * (j + j.conj().T)
    chi = choi_to_chi(Choi(j)).matrix
    return PauliChi(0.5 * (chi + chi.conj().T))
