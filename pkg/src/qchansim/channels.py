"""Qubit channel representations and conversions between them.

Three representations are supported, each as a small immutable wrapper:

``Kraus``
    A list of 2x2 operators ``K_i`` with ``E(rho) = sum K_i rho K_i^H``.
``Choi``
    The unnormalized Choi matrix ``J = sum_ij E(|i><j|) (x) |i><j|`` with the
    channel output as the *first* tensor factor, so ``J[2a+i, 2b+j] =
    E(|i><j|)[a, b]``. A trace-preserving channel has ``Tr J = 2``. This is the
    canonical form: comparisons and mixtures are done on it.
``PauliChi``
    The process matrix in the basis ``(I, X, Y, Z)``, ``E(rho) = sum_ij
    chi_ij P_i rho P_j``, with unit trace for trace-preserving channels.

Density matrices are plain 2x2 complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from qchansim.numerics import PAULIS, PSD_TOL, NotPSD, as_cmat, hermitian_eig, hermitian_violation

KRAUS_DROP_TOL = 1e-10
VALIDATION_TOL = 1e-9

# Row-major vectorizations of the Pauli basis; vec(P_a)^H vec(P_b) = 2 delta_ab.
_PAULI_VECS = np.stack([p.reshape(-1) for p in PAULIS], axis=1)


class AllZeroWeights(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Kraus:
    ops: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.ops)
        if not 1 <= len(ops) <= 4:
            raise ValueError(f"a qubit channel needs 1-4 Kraus operators, got {len(ops)}")
        for k in ops:
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got {k.shape}")
            if not np.all(np.isfinite(k)):
                raise ValueError("Kraus operator has non-finite entries")
            k.flags.writeable = False
        object.__setattr__(self, "ops", ops)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


@dataclass(frozen=True, eq=False)
class Choi:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.matrix).copy()
        if m.shape != (4, 4):
            raise ValueError(f"Choi matrix must be 4x4, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class PauliChi:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.matrix).copy()
        if m.shape != (4, 4):
            raise ValueError(f"chi matrix must be 4x4, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


Channel = Union[Kraus, Choi, PauliChi]


def kraus_to_choi(k: Kraus) -> Choi:
    vecs = np.stack([op.reshape(-1) for op in k.ops], axis=1)
    return Choi(vecs @ vecs.conj().T)


def choi_to_kraus(j: Choi, tol: float = PSD_TOL) -> Kraus:
    """Kraus operators from the eigendecomposition of a PSD Choi matrix.

    Eigenvalues below ``1e-10`` are dropped so that round-off does not create
    spurious operators.
    """
    w, v = hermitian_eig(j.matrix, tol=max(tol, 1e-10))
    if w.min() < -tol:
        raise NotPSD(f"Choi matrix has eigenvalue {w.min():.3e}")
    keep = w > KRAUS_DROP_TOL
    if not keep.any():
        raise ValueError("Choi matrix is zero; no Kraus operators")
    ops = [np.sqrt(w[i]) * v[:, i].reshape(2, 2) for i in np.flatnonzero(keep)]
    return Kraus(tuple(ops))


def choi_to_chi(j: Choi) -> PauliChi:
    return PauliChi(_PAULI_VECS.conj().T @ j.matrix @ _PAULI_VECS / 4)


def chi_to_choi(c: PauliChi) -> Choi:
    return Choi(_PAULI_VECS @ c.matrix @ _PAULI_VECS.conj().T)


def as_choi(ch: Channel) -> Choi:
    if isinstance(ch, Choi):
        return ch
    if isinstance(ch, Kraus):
        return kraus_to_choi(ch)
    if isinstance(ch, PauliChi):
        return chi_to_choi(ch)
    raise TypeError(f"not a channel representation: {type(ch).__name__}")


def as_kraus(ch: Channel) -> Kraus:
    if isinstance(ch, Kraus):
        return ch
    return choi_to_kraus(as_choi(ch))


def as_chi(ch: Channel) -> PauliChi:
    if isinstance(ch, PauliChi):
        return ch
    return choi_to_chi(as_choi(ch))


def apply(ch: Channel, rho) -> np.ndarray:
    """Map the 2x2 density matrix ``rho`` through ``ch``."""
    rho = np.asarray(rho, dtype=complex)
    if isinstance(ch, Kraus):
        out = sum(k @ rho @ k.conj().T for k in ch.ops)
    elif isinstance(ch, PauliChi):
        c = ch.matrix
        out = sum(c[i, j] * PAULIS[i] @ rho @ PAULIS[j] for i in range(4) for j in range(4))
    elif isinstance(ch, Choi):
        j4 = ch.matrix.reshape(2, 2, 2, 2)
        out = np.einsum("aibj,ij->ab", j4, rho)
    else:
        raise TypeError(f"not a channel representation: {type(ch).__name__}")
    return 0.5 * (out + out.conj().T)


def mix(entries: Iterable[tuple[float, Channel]]) -> Choi:
    """Convex combination ``sum w_i E_i / sum w_i`` of channels.

    Weights need not be normalized, so collection times ``(t1, t2)`` can be
    passed directly.
    """
    entries = list(entries)
    weights = [float(w) for w, _ in entries]
    if any(w < 0 for w in weights):
        raise ValueError("mixture weights must be non-negative")
    total = sum(weights)
    if not entries or total <= 0:
        raise AllZeroWeights("mixture weights sum to zero")
    acc = sum(w * as_choi(ch).matrix for w, (_, ch) in zip(weights, entries))
    return Choi(acc / total)


def identity_channel() -> Kraus:
    return Kraus((np.eye(2),))


def unitary_channel(u) -> Kraus:
    return Kraus((np.asarray(u, dtype=complex),))


def compose(second: Channel, first: Channel) -> Kraus:
    """Kraus form of ``second o first``."""
    a, b = as_kraus(second), as_kraus(first)
    ops = [ka @ kb for ka in a.ops for kb in b.ops]
    if len(ops) <= 4:
        return Kraus(tuple(ops))
    # more products than a qubit channel needs; re-extract a minimal set
    vecs = np.stack([op.reshape(-1) for op in ops], axis=1)
    return choi_to_kraus(Choi(vecs @ vecs.conj().T))


@dataclass(frozen=True)
class ValidationReport:
    hermitian: bool
    psd: bool
    trace_preserving: bool
    trace_nonincreasing: bool
    worst_violation: float
    hermitian_violation: float
    min_eigenvalue: float
    tp_violation: float


def validate(ch: Channel, tol: float = VALIDATION_TOL) -> ValidationReport:
    """Check Hermiticity, complete positivity and the trace conditions.

    ``worst_violation`` is the largest violation among the properties any
    physical channel must have (Hermitian, PSD, trace-nonincreasing);
    ``tp_violation`` is reported separately since trace-decreasing maps are
    legitimate.
    """
    j = as_choi(ch).matrix
    herm = hermitian_violation(j)
    jh = 0.5 * (j + j.conj().T)
    min_eig = float(np.linalg.eigvalsh(jh).min())
    # Tr_out J = (sum K^H K)^T
    a = np.einsum("aiaj->ij", jh.reshape(2, 2, 2, 2))
    a = 0.5 * (a + a.conj().T)
    tp = float(np.max(np.abs(a - np.eye(2))))
    tni = max(0.0, float(np.linalg.eigvalsh(a).max()) - 1.0)
    worst = max(herm, max(0.0, -min_eig), tni)
    return ValidationReport(
        hermitian=herm <= tol,
        psd=min_eig >= -tol,
        trace_preserving=tp <= tol,
        trace_nonincreasing=tni <= tol,
        worst_violation=worst,
        hermitian_violation=herm,
        min_eigenvalue=min_eig,
        tp_violation=tp,
    )


# JSON: {"repr": "kraus"|"choi"|"pauli_chi", "data": nested [re, im] pairs}

REPR_NAMES = {Kraus: "kraus", Choi: "choi", PauliChi: "pauli_chi"}


def _encode(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _decode(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def channel_to_json(ch: Channel) -> dict:
    if isinstance(ch, Kraus):
        data = [_encode(k) for k in ch.ops]
    else:
        data = _encode(ch.matrix)
    return {"repr": REPR_NAMES[type(ch)], "data": data}


def channel_from_json(doc: dict) -> Channel:
    try:
        kind = doc["repr"]
        data = doc["data"]
    except (KeyError, TypeError):
        raise ValueError('channel JSON needs "repr" and "data" fields') from None
    if kind == "kraus":
        return Kraus(tuple(_decode(k) for k in data))
    if kind == "choi":
        return Choi(_decode(data))
    if kind == "pauli_chi":
        return PauliChi(_decode(data))
    raise ValueError(f"unknown channel repr {kind!r}")
