"""Seeded Haar-random unitaries and random channels from Stinespring dilation.

All randomness flows through counter-based Philox generators keyed by
``(seed, *stream_key)``, so every independent draw (a restart, a tomography
setting) has its own stream and results never depend on evaluation order.
"""

import numpy as np

from qchansim.channels import Kraus

SUPPORTED_DIMS = (2, 4, 8)
MAX_SEED = 2**64 - 1

# stream purposes
HAAR = 0
RESTART = 1
TOMOGRAPHY = 2


class UnsupportedDim(ValueError):
    pass


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def haar_from_generator(dim: int, rng: np.random.Generator) -> np.ndarray:
    # QR of a complex Ginibre matrix; fixing the phases of diag(R) makes Q Haar distributed
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    if dim not in SUPPORTED_DIMS:
        raise UnsupportedDim(f"dim must be one of {SUPPORTED_DIMS}, got {dim}")
    return haar_from_generator(dim, stream(seed, HAAR, dim))


def random_channel(seed: int) -> Kraus:
    """Random qubit channel from a Haar-random unitary on environment (x) system.

    The 8x8 unitary acts on two environment qubits followed by the system
    qubit. With the environment prepared in ``|0>``, ``K_i = <i|U|0>`` is the
    2x2 block at environment row ``i`` and environment column ``0``.
    """
    u = haar_unitary(8, seed)
    return Kraus(tuple(u[2 * i:2 * i + 2, 0:2] for i in range(4)))
