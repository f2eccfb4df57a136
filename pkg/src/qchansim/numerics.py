"""Dense linear algebra on the 2x2 and 4x4 complex matrices used throughout."""

import math

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)


class NonHermitian(ValueError):
    pass


class NotPSD(ValueError):
    pass


def as_cmat(m) -> np.ndarray:
    """Coerce ``m`` to a square complex array and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermitian_violation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in descending order. Each eigenvector column is
    rephased so that its largest-magnitude component is real and positive,
    which makes the output deterministic for non-degenerate spectra.

    Raises
    ------
    NonHermitian
        If ``max|m - m^H|`` exceeds ``tol``.
    """
    a = as_cmat(m)
    if hermitian_violation(a) > tol:
        raise NonHermitian(f"matrix is not Hermitian (violation {hermitian_violation(a):.3e})")
    a = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(a)
    w, v = w[::-1], v[:, ::-1]
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    v = v * (np.abs(lead) / lead)
    return w, v


def psd_sqrt(m, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    raises ``NotPSD``.
    """
    w, v = hermitian_eig(m)
    if w.min() < -tol:
        raise NotPSD(f"matrix has eigenvalue {w.min():.3e} < -{tol:g}")
    w = np.clip(w, 0.0, None)
    r = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (r + r.conj().T)


def trace_norm(m) -> float:
    """Sum of singular values."""
    a = as_cmat(m)
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def ket(label: str) -> np.ndarray:
    """Polarization kets with |H> = |0> and |V> = |1>."""
    s = 1 / np.sqrt(2)
    kets = {
        "H": [1, 0],
        "V": [0, 1],
        "D": [s, s],
        "A": [s, -s],
        "L": [s, 1j * s],
        "R": [s, -1j * s],
    }
    return np.array(kets[label], dtype=complex)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def state_fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``Tr(sqrt(sqrt(rho) sigma sqrt(rho)))**2``.

    For qubits the closed form ``Tr(rho sigma) + 2 sqrt(det rho det sigma)``
    is used; it avoids square roots of near-zero eigenvalues, which cost
    about half the digits for pure states.
    """
    rho = as_cmat(rho)
    sigma = as_cmat(sigma)
    if rho.shape == (2, 2):
        overlap = float(np.trace(rho @ sigma).real)
        dets = float(np.linalg.det(rho).real * np.linalg.det(sigma).real)
        return overlap + 2 * math.sqrt(max(dets, 0.0))
    s = psd_sqrt(rho)
    inner = s @ sigma @ s
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
